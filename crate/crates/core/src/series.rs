//! Linear recurrences, power laws and growth classes of integer and real
//! sequences.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Tolerance on successive ratios `b_{n+1}/b_n` for exponential growth.
pub const RATIO_TOLERANCE: f64 = 0.05;
/// Finite differences must vanish exactly for polynomial growth.
pub const DIFFERENCE_TOLERANCE: u32 = 0;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecurrenceFit {
    pub order: usize,
    /// `c_1 … c_d` with `b_n = Σ c_i b_{n−i}`.
    pub coefficients: Vec<BigRational>,
    pub prefix_len: usize,
    pub holdout: usize,
}

impl RecurrenceFit {
    /// Next term after `history`, which needs at least `order` entries.
    pub fn predict(&self, history: &[BigInt]) -> Option<BigRational> {
        if history.len() < self.order {
            return None;
        }
        let n = history.len();
        Some(
            self.coefficients
                .iter()
                .enumerate()
                .fold(BigRational::zero(), |acc, (i, c)| {
                    acc + c * BigRational::from_integer(history[n - 1 - i].clone())
                }),
        )
    }
}

/// Minimal connection polynomial `1 + C_1 x + … + C_L x^L` of `s`.
fn berlekamp_massey(s: &[BigRational]) -> (usize, Vec<BigRational>) {
    let zero = BigRational::zero();
    let one = BigRational::from_integer(1.into());
    let mut c = vec![one.clone()];
    let mut b = vec![one.clone()];
    let mut l = 0usize;
    let mut m = 1usize;
    let mut bd = one;
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &s[n - i];
        }
        if d == zero {
            m += 1;
            continue;
        }
        let coef = &d / &bd;
        let mut next = c.clone();
        if next.len() < b.len() + m {
            next.resize(b.len() + m, zero.clone());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + m] -= &coef * bi;
        }
        if 2 * l <= n {
            b = std::mem::replace(&mut c, next);
            l = n + 1 - l;
            bd = d;
            m = 1;
        } else {
            c = next;
            m += 1;
        }
    }
    c.resize(l + 1, zero);
    (l, c)
}

/// Minimal linear recurrence of the sequence without its last `holdout`
/// terms, accepted only if it also reproduces those terms exactly.
pub fn fit_recurrence(
    seq: &[BigInt],
    max_order: usize,
    holdout: usize,
) -> Result<Option<RecurrenceFit>> {
    let needed = 2 * max_order + holdout;
    if seq.len() < needed {
        return Err(Error::InsufficientData {
            needed,
            got: seq.len(),
        });
    }
    let q: Vec<BigRational> = seq.iter().cloned().map(BigRational::from_integer).collect();
    let prefix_len = seq.len() - holdout;
    let (order, conn) = berlekamp_massey(&q[..prefix_len]);
    if order > max_order {
        return Ok(None);
    }
    let fit = RecurrenceFit {
        order,
        coefficients: conn[1..].iter().map(|c| -c).collect(),
        prefix_len,
        holdout,
    };
    for n in order..seq.len() {
        if fit.predict(&seq[..n]) != Some(q[n].clone()) {
            return Ok(None);
        }
    }
    Ok(Some(fit))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum Window {
    All,
    UpperHalf,
    /// Indices `start..end`.
    Range { start: usize, end: usize },
}

impl std::str::FromStr for Window {
    type Err = Error;

    /// `all`, `upper`, or `a:b` (indices, end exclusive).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Window::All),
            "upper" | "upper-half" => Ok(Window::UpperHalf),
            _ => {
                let (a, b) = s
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidArgument(format!("bad window '{s}'")))?;
                let parse = |x: &str| {
                    x.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::InvalidArgument(format!("bad window '{s}'")))
                };
                Ok(Window::Range {
                    start: parse(a)?,
                    end: parse(b)?,
                })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// Natural-log intercept.
    pub intercept: f64,
    pub window: (usize, usize),
    pub residual_rms: f64,
}

/// Least-squares slope of `ln y` against `ln x` over the window.
pub fn fit_power(xs: &[f64], ys: &[f64], window: Window) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidArgument(format!(
            "{} x values for {} y values",
            xs.len(),
            ys.len()
        )));
    }
    let (start, end) = match window {
        Window::All => (0, xs.len()),
        Window::UpperHalf => (xs.len() / 2, xs.len()),
        Window::Range { start, end } => (start, end),
    };
    if end > xs.len() || start >= end || end - start < 2 {
        return Err(Error::InsufficientData {
            needed: 2,
            got: end.saturating_sub(start).min(xs.len()),
        });
    }
    let (x, y) = (&xs[start..end], &ys[start..end]);
    if x.iter().chain(y).any(|v| *v <= 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument("power-law fit needs positive finite values".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let sxx: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all x values coincide".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let rss: f64 = lx
        .iter()
        .zip(&ly)
        .map(|(a, b)| {
            let r = b - (intercept + exponent * a);
            r * r
        })
        .sum();
    Ok(PowerLawFit {
        exponent,
        intercept,
        window: (start, end),
        residual_rms: (rss / k).sqrt(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "lowercase", tag = "class")]
pub enum GrowthClass {
    Polynomial { degree: usize },
    Exponential { rate: f64 },
    Inconclusive,
}

/// Looks at the last two thirds of the sequence: polynomial of degree `d`
/// if the `(d+1)`-th differences vanish there, exponential if successive
/// ratios settle above one.
pub fn classify_growth(seq: &[BigUint]) -> GrowthClass {
    if seq.len() < 8 {
        return GrowthClass::Inconclusive;
    }
    let tail: Vec<BigInt> = seq[seq.len() / 3..].iter().cloned().map(BigInt::from).collect();
    let mut diff = tail.clone();
    for degree in 0.. {
        diff = diff.windows(2).map(|w| &w[1] - &w[0]).collect();
        if diff.len() < 2 {
            break;
        }
        if diff.iter().all(|d| d.abs() <= BigInt::from(DIFFERENCE_TOLERANCE)) {
            return GrowthClass::Polynomial { degree };
        }
    }
    let ratios: Option<Vec<f64>> = tail
        .windows(2)
        .map(|w| {
            if w[0].is_zero() {
                None
            } else {
                (BigRational::new(w[1].clone(), w[0].clone())).to_f64()
            }
        })
        .collect();
    if let Some(r) = ratios {
        let last = *r.last().expect("tail has at least two terms");
        if last > 1.0 + RATIO_TOLERANCE && r.iter().all(|x| (x - last).abs() <= RATIO_TOLERANCE) {
            return GrowthClass::Exponential { rate: last };
        }
    }
    GrowthClass::Inconclusive
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: impl IntoIterator<Item = i64>) -> Vec<BigInt> {
        v.into_iter().map(BigInt::from).collect()
    }

    fn q(a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }

    /// Smallest order solved by Gaussian elimination on the Hankel system.
    fn hankel_order(s: &[BigRational], max: usize) -> usize {
        'order: for d in 0..=max {
            // Unknowns c_1..c_d; equations n = d..len.
            let rows: Vec<Vec<BigRational>> = (d..s.len())
                .map(|n| {
                    let mut r: Vec<BigRational> = (1..=d).map(|i| s[n - i].clone()).collect();
                    r.push(s[n].clone());
                    r
                })
                .collect();
            let mut m = rows;
            let mut rank = 0;
            for col in 0..d {
                let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
                    continue;
                };
                m.swap(rank, p);
                let piv = m[rank][col].clone();
                let pr: Vec<BigRational> = m[rank].iter().map(|x| x / &piv).collect();
                for (i, row) in m.iter_mut().enumerate() {
                    if i != rank && !row[col].is_zero() {
                        let f = row[col].clone();
                        for (x, y) in row.iter_mut().zip(&pr) {
                            *x -= &f * y;
                        }
                    }
                }
                m[rank] = pr;
                rank += 1;
            }
            for row in &m[rank..] {
                if !row[d].is_zero() {
                    continue 'order;
                }
            }
            return d;
        }
        usize::MAX
    }

    #[test]
    fn arithmetic_progression() {
        let s = ints((0..30).map(|n| 2 * n + 1));
        let f = fit_recurrence(&s, 4, 10).unwrap().unwrap();
        assert_eq!(f.order, 2);
        assert_eq!(f.coefficients, [q(2), q(-1)]);
        assert_eq!(f.holdout, 10);
    }

    #[test]
    fn free_group_growth() {
        let s = ints((0..20).map(|n| 2 * 3i64.pow(n) - 1));
        let f = fit_recurrence(&s, 4, 10).unwrap().unwrap();
        assert_eq!(f.coefficients, [q(4), q(-3)]);
    }

    #[test]
    fn noise_has_no_recurrence() {
        let s = ints([3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2, 3, 8, 4]);
        assert_eq!(fit_recurrence(&s, 4, 10).unwrap(), None);
    }

    #[test]
    fn holdout_failure_is_rejected() {
        // Satisfies b_n = 2 b_{n-1} on the prefix only.
        let mut v: Vec<i64> = (0..16).map(|n| 1 << n).collect();
        v[15] += 1;
        assert_eq!(fit_recurrence(&ints(v), 3, 4).unwrap(), None);
    }

    #[test]
    fn too_short() {
        assert!(matches!(
            fit_recurrence(&ints([1, 2, 3]), 2, 10),
            Err(Error::InsufficientData { needed: 14, got: 3 })
        ));
    }

    #[test]
    fn orders_match_elimination() {
        let seqs = [
            ints((0..24).map(|n| n * n * n - 3 * n)),
            ints((0..24).map(|n| if n % 3 == 0 { 1 } else { 0 })),
            ints((0..24).map(|n| (1i64 << (n / 2)) + n)),
        ];
        for s in seqs {
            let f = fit_recurrence(&s, 6, 8).unwrap().unwrap();
            let r: Vec<BigRational> = s.iter().cloned().map(BigRational::from_integer).collect();
            assert_eq!(f.order, hankel_order(&r[..16], 6));
        }
    }

    #[test]
    fn exact_power_laws() {
        let xs: Vec<f64> = [100.0, 300.0, 1e3, 3e3, 1e4].to_vec();
        let ys: Vec<f64> = xs.iter().map(|x| x.sqrt()).collect();
        let f = fit_power(&xs, &ys, Window::All).unwrap();
        assert!((f.exponent - 0.5).abs() < 1e-6);
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x).collect();
        let f = fit_power(&xs, &ys, Window::UpperHalf).unwrap();
        assert!((f.exponent - 1.0).abs() < 1e-6);
        assert_eq!(f.window, (2, 5));
        assert!((f.intercept - 3.5f64.ln()).abs() < 1e-9);
        assert!(fit_power(&xs, &[1.0, 0.0, 1.0, 1.0, 1.0], Window::All).is_err());
    }

    #[test]
    fn integer_drift_exponent() {
        // Exact E|S_n| from the binomial distribution, for n = 2^4 … 2^14.
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for e in 4..=14 {
            let n = 1usize << e;
            // log C(n, k) - n log 2 via lgamma-free running sums.
            let mut logp = -(n as f64) * 2f64.ln();
            let mut mean = 0.0;
            for k in 0..=n {
                if k > 0 {
                    logp += ((n - k + 1) as f64).ln() - (k as f64).ln();
                }
                mean += (2.0 * k as f64 - n as f64).abs() * logp.exp();
            }
            xs.push(n as f64);
            ys.push(mean);
        }
        let f = fit_power(&xs, &ys, Window::UpperHalf).unwrap();
        assert!((0.48..=0.52).contains(&f.exponent), "{f:?}");
    }

    #[test]
    fn window_parsing() {
        assert_eq!("all".parse::<Window>().unwrap(), Window::All);
        assert_eq!("1:4".parse::<Window>().unwrap(), Window::Range { start: 1, end: 4 });
        assert!("x".parse::<Window>().is_err());
    }

    #[test]
    fn growth_classes() {
        let big = |v: Vec<u64>| v.into_iter().map(BigUint::from).collect::<Vec<_>>();
        assert_eq!(
            classify_growth(&big((0..16).map(|n| 2 * n * n + 2 * n + 1).collect())),
            GrowthClass::Polynomial { degree: 2 }
        );
        assert_eq!(classify_growth(&big(vec![7; 10])), GrowthClass::Polynomial { degree: 0 });
        match classify_growth(&big((0..14).map(|n| 2 * 3u64.pow(n) - 1).collect())) {
            GrowthClass::Exponential { rate } => assert!((rate - 3.0).abs() < 0.05),
            c => panic!("{c:?}"),
        }
        assert_eq!(classify_growth(&big(vec![1, 2, 3])), GrowthClass::Inconclusive);
    }
}
