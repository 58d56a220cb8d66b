use std::collections::HashSet;

use num_bigint::BigUint;

use super::length_lex;
use crate::automata::{Symbol, Word};
use crate::error::{Error, Result};
use crate::transducer::ClassTTransducer;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowthRecord {
    pub base_word: Word,
    /// `b_0 … b_N`.
    pub values: Vec<BigUint>,
    /// `#W_0 … #W_N`.
    pub frontier_sizes: Vec<usize>,
}

pub fn growth(t: &ClassTTransducer, n: usize) -> Result<GrowthRecord> {
    growth_from(t, t.base_word(), n)
}

/// `b_n = #(W_0 ∪ … ∪ W_n)` with `W_0 = {w₀}` and `W_{i+1} = T(W_i)`.
pub fn growth_from(t: &ClassTTransducer, w0: &[Symbol], n: usize) -> Result<GrowthRecord> {
    if !t.presentation().contains(w0) {
        return Err(Error::NotInDomain(t.presentation().alphabet().render_word(w0)));
    }
    let mut seen: HashSet<Word> = HashSet::from([w0.to_vec()]);
    let mut layer: Vec<Word> = vec![w0.to_vec()];
    let mut values = vec![BigUint::from(1u32)];
    let mut frontier_sizes = vec![1];
    for _ in 0..n {
        let mut next: HashSet<Word> = HashSet::new();
        for w in &layer {
            for y in t.outputs(w)?.iter() {
                if !next.contains(y) {
                    next.insert(y.clone());
                }
            }
        }
        for y in &next {
            if !seen.contains(y) {
                seen.insert(y.clone());
            }
        }
        values.push(BigUint::from(seen.len()));
        frontier_sizes.push(next.len());
        layer = next.into_iter().collect();
    }
    Ok(GrowthRecord {
        base_word: w0.to_vec(),
        values,
        frontier_sizes,
    })
}

/// The ball `V_r` around `w0`, in length-lexicographic order.
pub fn ball_words(t: &ClassTTransducer, w0: &[Symbol], r: usize) -> Result<Vec<Word>> {
    Ok(ball_layers(t, w0, r)?.pop().unwrap_or_default())
}

/// `V_0, …, V_r`, each sorted length-lexicographically.
pub(crate) fn ball_layers(t: &ClassTTransducer, w0: &[Symbol], r: usize) -> Result<Vec<Vec<Word>>> {
    if !t.presentation().contains(w0) {
        return Err(Error::NotInDomain(t.presentation().alphabet().render_word(w0)));
    }
    let mut seen: HashSet<Word> = HashSet::from([w0.to_vec()]);
    let mut all = vec![w0.to_vec()];
    let mut frontier = vec![w0.to_vec()];
    let mut out = vec![all.clone()];
    for _ in 0..r {
        let mut next = Vec::new();
        for w in &frontier {
            for y in t.outputs(w)?.iter() {
                if seen.insert(y.clone()) {
                    next.push(y.clone());
                }
            }
        }
        all.extend(next.iter().cloned());
        all.sort_by(|a, b| length_lex(a, b));
        out.push(all.clone());
        frontier = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{oracle_free, oracle_zm};
    use crate::presentations::preset;

    fn tr(name: &str) -> ClassTTransducer {
        ClassTTransducer::from_presentation(preset(name).unwrap()).unwrap()
    }

    #[test]
    fn integers() {
        let g = growth(&tr("z1"), 50).unwrap();
        for (n, b) in g.values.iter().enumerate() {
            assert_eq!(*b, BigUint::from(2 * n + 1));
        }
        // W_n alternates parity: the n + 1 points of parity n in [-n, n].
        assert_eq!(g.frontier_sizes[4], 5);
    }

    #[test]
    fn matches_oracle_balls() {
        let g = growth(&tr("f2"), 5).unwrap();
        let o = oracle_free(2).unwrap();
        for (n, b) in g.values.iter().enumerate() {
            assert_eq!(*b, BigUint::from(o.ball(n).len()));
        }
        let g = growth(&tr("z3"), 5).unwrap();
        let o = oracle_zm(3).unwrap();
        for (n, b) in g.values.iter().enumerate() {
            assert_eq!(*b, BigUint::from(o.ball(n).len()));
        }
    }

    #[test]
    fn rejects_foreign_base_word() {
        let t = tr("z1");
        assert!(matches!(growth_from(&t, &[0, 1], 3), Err(Error::NotInDomain(_))));
    }

    #[test]
    fn ball_is_sorted() {
        let t = tr("z1");
        let b = ball_words(&t, t.base_word(), 2).unwrap();
        let a = t.presentation().alphabet();
        let r: Vec<String> = b.iter().map(|w| a.render_word(w)).collect();
        assert_eq!(r, ["", "p", "n", "pp", "nn"]);
    }
}
