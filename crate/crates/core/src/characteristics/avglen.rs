use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::automata::{Symbol, Word};
use crate::error::{Error, Result};
use crate::oracles::{stream_rng, summarize};
use crate::transducer::ClassTTransducer;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvgLengthRecord {
    pub n: usize,
    /// `Σ m_w |w|` over the multiset `M_n`.
    pub total_length: BigUint,
    /// `kⁿ`.
    pub total_mass: BigUint,
    pub distinct_words: usize,
}

impl AvgLengthRecord {
    /// `ℓ_n` in lowest terms.
    pub fn mean(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.total_length.clone()),
            BigInt::from(self.total_mass.clone()),
        )
    }

    pub fn mean_f64(&self) -> f64 {
        let m = self.mean();
        num_traits::ToPrimitive::to_f64(&m).unwrap_or(f64::NAN)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvgLengthSeries {
    pub records: Vec<AvgLengthRecord>,
    /// Set when the distinct-word budget stopped the recursion early.
    pub truncated_at: Option<usize>,
}

/// `ℓ_0 … ℓ_N` by propagating multiplicities through the transducer. Stops
/// before any step whose multiset would exceed `max_distinct` words.
pub fn avg_length_exact(
    t: &ClassTTransducer,
    w0: &[Symbol],
    n: usize,
    max_distinct: Option<usize>,
) -> Result<AvgLengthSeries> {
    if !t.presentation().contains(w0) {
        return Err(Error::NotInDomain(t.presentation().alphabet().render_word(w0)));
    }
    let k = BigUint::from(t.num_labels());
    let mut counts: HashMap<Word, BigUint> = HashMap::from([(w0.to_vec(), BigUint::one())]);
    let mut mass = BigUint::one();
    let record = |i: usize, counts: &HashMap<Word, BigUint>, mass: &BigUint| AvgLengthRecord {
        n: i,
        total_length: counts
            .iter()
            .fold(BigUint::zero(), |acc, (w, c)| acc + c * BigUint::from(w.len())),
        total_mass: mass.clone(),
        distinct_words: counts.len(),
    };
    let mut records = vec![record(0, &counts, &mass)];
    for i in 1..=n {
        let mut next: HashMap<Word, BigUint> = HashMap::with_capacity(counts.len() * 2);
        for (w, c) in &counts {
            for y in t.outputs(w)?.iter() {
                match next.get_mut(y) {
                    Some(v) => *v += c,
                    None => {
                        next.insert(y.clone(), c.clone());
                    }
                }
            }
            if max_distinct.is_some_and(|m| next.len() > m) {
                return Ok(AvgLengthSeries {
                    records,
                    truncated_at: Some(i),
                });
            }
        }
        counts = next;
        mass *= &k;
        records.push(record(i, &counts, &mass));
    }
    Ok(AvgLengthSeries {
        records,
        truncated_at: None,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub n: usize,
    pub samples: usize,
    pub mean: f64,
    pub stderr: f64,
    pub seed: u64,
}

/// Mean of `|w|` after `n` uniformly random labels from `w0`; sample `i`
/// draws from stream `i` of `seed`.
pub fn avg_length_mc(
    t: &ClassTTransducer,
    w0: &[Symbol],
    n: usize,
    samples: usize,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if !t.presentation().contains(w0) {
        return Err(Error::NotInDomain(t.presentation().alphabet().render_word(w0)));
    }
    let k = t.num_labels();
    let lengths: Vec<f64> = (0..samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut w = w0.to_vec();
            for _ in 0..n {
                let j = rng.random_range(0..k);
                w = t.outputs(&w)?[j].clone();
            }
            Ok(w.len() as f64)
        })
        .collect::<Result<_>>()?;
    let (mean, stderr) = summarize(&lengths);
    Ok(McEstimate {
        n,
        samples,
        mean,
        stderr,
        seed,
    })
}
