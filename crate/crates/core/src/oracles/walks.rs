//! Monte Carlo estimates of random-walk functionals under the uniform
//! measure on the generating set.

use std::collections::HashSet;
use std::fmt;
use std::hash::Hash;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{stream_rng, Group, OracleGroup};
use crate::error::{Error, Result};

/// Restarts allowed per sample before giving up.
const MAX_RESTARTS: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Functional {
    Drift,
    Range,
}

impl fmt::Display for Functional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Functional::Drift => "drift",
            Functional::Range => "range",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalkFunctionalEstimate {
    pub functional: Functional,
    pub n: usize,
    pub mean: f64,
    pub stderr: f64,
    pub samples: usize,
    /// Walks discarded because a length exceeded the search cap.
    pub invalid: usize,
    pub seed: u64,
}

/// Mean and standard error of the mean, summed in the given order.
pub fn summarize(values: &[f64]) -> (f64, f64) {
    let k = values.len();
    if k == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / k as f64;
    if k == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (k - 1) as f64;
    (mean, (var / k as f64).sqrt())
}

fn check_grid(ns: &[usize], samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("n-grid must be non-empty and strictly increasing".into()));
    }
    Ok(())
}

/// Walks `samples` trajectories of length `max(ns)`, each on its own random
/// stream, folding every visited element into `state` and recording
/// `observe` at every grid point. An observation of `None` discards the
/// trajectory and restarts it on the same stream.
fn run_grid<G, S, F>(
    oracle: &OracleGroup<G>,
    ns: &[usize],
    samples: usize,
    seed: u64,
    init: impl Fn() -> S + Sync,
    step: impl Fn(&mut S, &G::Elem) + Sync,
    observe: F,
) -> Result<(Vec<Vec<f64>>, usize)>
where
    G: Group,
    F: Fn(&S, &G::Elem) -> Option<f64> + Sync,
{
    check_grid(ns, samples)?;
    let k = oracle.gens().len();
    let n_max = *ns.last().expect("non-empty grid");
    let per_sample: Vec<Result<(Vec<f64>, u32)>> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut restarts = 0;
            'walk: loop {
                let mut g = oracle.identity();
                let mut state = init();
                step(&mut state, &g);
                let mut out = Vec::with_capacity(ns.len());
                let mut next = 0;
                for t in 0..=n_max {
                    if t > 0 {
                        let j = rng.random_range(0..k);
                        oracle.group().mul_assign(&mut g, &oracle.gens().elems()[j]);
                        step(&mut state, &g);
                    }
                    if ns[next] == t {
                        match observe(&state, &g) {
                            Some(v) => out.push(v),
                            None => {
                                restarts += 1;
                                if restarts > MAX_RESTARTS {
                                    return Err(Error::BudgetExceeded(format!(
                                        "sample {i}: {MAX_RESTARTS} walks in a row left the length cap"
                                    )));
                                }
                                continue 'walk;
                            }
                        }
                        next += 1;
                        if next == ns.len() {
                            break;
                        }
                    }
                }
                return Ok((out, restarts));
            }
        })
        .collect();
    let mut by_n = vec![Vec::with_capacity(samples); ns.len()];
    let mut invalid = 0usize;
    for r in per_sample {
        let (vals, restarts) = r?;
        invalid += restarts as usize;
        for (slot, v) in by_n.iter_mut().zip(vals) {
            slot.push(v);
        }
    }
    Ok((by_n, invalid))
}

fn estimates(
    functional: Functional,
    ns: &[usize],
    by_n: Vec<Vec<f64>>,
    invalid: usize,
    seed: u64,
) -> Vec<WalkFunctionalEstimate> {
    ns.iter()
        .zip(by_n)
        .map(|(&n, vals)| {
            let (mean, stderr) = summarize(&vals);
            WalkFunctionalEstimate {
                functional,
                n,
                mean,
                stderr,
                samples: vals.len(),
                invalid,
                seed,
            }
        })
        .collect()
}

/// `E[ℓ_S]` after each `n` in `ns`, measured along shared trajectories.
/// Lengths come from the closed form when available, otherwise from a
/// bounded search with radius `cap`; walks reaching beyond the cap are
/// discarded, restarted and counted as invalid.
pub fn walk_drift_grid<G: Group>(
    oracle: &OracleGroup<G>,
    ns: &[usize],
    samples: usize,
    seed: u64,
    cap: u64,
) -> Result<Vec<WalkFunctionalEstimate>> {
    let (by_n, invalid) = run_grid(
        oracle,
        ns,
        samples,
        seed,
        || (),
        |_, _| {},
        |_, g| oracle.word_length(g, cap).ok().map(|l| l as f64),
    )?;
    Ok(estimates(Functional::Drift, ns, by_n, invalid, seed))
}

pub fn walk_drift<G: Group>(
    oracle: &OracleGroup<G>,
    n: usize,
    samples: usize,
    seed: u64,
    cap: u64,
) -> Result<WalkFunctionalEstimate> {
    Ok(walk_drift_grid(oracle, &[n], samples, seed, cap)?.remove(0))
}

/// Mean number of distinct vertices visited within the first `n` steps,
/// for each `n` in `ns`.
pub fn walk_range_grid<G: Group>(
    oracle: &OracleGroup<G>,
    ns: &[usize],
    samples: usize,
    seed: u64,
) -> Result<Vec<WalkFunctionalEstimate>> {
    walk_range_grid_by(oracle, ns, samples, seed, |g: &G::Elem| g.clone())
}

/// Like [`walk_range_grid`], counting distinct values of `key` along the
/// trajectory instead of distinct elements; with the base position as key
/// this is the range of the projected walk.
pub fn walk_range_grid_by<G, K>(
    oracle: &OracleGroup<G>,
    ns: &[usize],
    samples: usize,
    seed: u64,
    key: impl Fn(&G::Elem) -> K + Sync,
) -> Result<Vec<WalkFunctionalEstimate>>
where
    G: Group,
    K: Eq + Hash,
{
    let (by_n, invalid) = run_grid(
        oracle,
        ns,
        samples,
        seed,
        HashSet::new,
        |seen: &mut HashSet<K>, g| {
            seen.insert(key(g));
        },
        |seen, _| Some(seen.len() as f64),
    )?;
    Ok(estimates(Functional::Range, ns, by_n, invalid, seed))
}

pub fn walk_range<G: Group>(
    oracle: &OracleGroup<G>,
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<WalkFunctionalEstimate> {
    Ok(walk_range_grid(oracle, &[n], samples, seed)?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::super::{oracle_free, oracle_zm};
    use super::*;

    #[test]
    fn trivial_cases() {
        let z = oracle_zm(1).unwrap();
        let d = walk_drift(&z, 0, 10, 1, 8).unwrap();
        assert_eq!((d.mean, d.stderr), (0.0, 0.0));
        let r = walk_range(&z, 0, 10, 1).unwrap();
        assert_eq!(r.mean, 1.0);
    }

    #[test]
    fn two_step_drift_on_integers() {
        // E|S_2| = 1 for the simple walk.
        let z = oracle_zm(1).unwrap();
        let d = walk_drift(&z, 2, 20_000, 5, 8).unwrap();
        assert!((d.mean - 1.0).abs() <= 4.0 * d.stderr, "{d:?}");
    }

    #[test]
    fn deterministic_under_seed() {
        let f = oracle_free(2).unwrap();
        let a = walk_drift_grid(&f, &[5, 10], 200, 9, 8).unwrap();
        let b = walk_drift_grid(&f, &[5, 10], 200, 9, 8).unwrap();
        assert_eq!(a, b);
        let c = walk_drift_grid(&f, &[5, 10], 200, 10, 8).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn projected_range_counts_positions() {
        let l = super::super::oracle_lamplighter();
        let full = walk_range(&l, 50, 200, 4).unwrap();
        let base = walk_range_grid_by(&l, &[50], 200, 4, |g| g.pos).unwrap().remove(0);
        assert!(base.mean < full.mean);
        assert!(base.mean >= 1.0);
    }

    #[test]
    fn search_cap_marks_invalid_walks() {
        // Without a closed form and with cap 1, two-step walks ending at
        // distance 2 are discarded.
        let z = oracle_zm(1).unwrap();
        let bare = OracleGroup::new("z-bfs", *z.group(), z.gens().clone());
        let d = walk_drift(&bare, 2, 400, 3, 1).unwrap();
        assert!(d.invalid > 0);
        assert_eq!(d.mean, 0.0);
    }
}
