//! Transfer-matrix counting, ordered enumeration and uniform sampling of
//! accepted strings.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::RngCore;

use super::{deconvolve, determinize, StateId, SyncAutomaton, TapeVector, WordTuple};

/// `table[r][q]`: number of accepted strings of length `r` read from `q` in
/// the deterministic automaton `d`.
fn suffix_counts(d: &SyncAutomaton, max_len: usize) -> Vec<Vec<BigUint>> {
    let n = d.num_states();
    let mut table = Vec::with_capacity(max_len + 1);
    table.push(
        (0..n)
            .map(|q| if d.is_accepting(q) { BigUint::one() } else { BigUint::zero() })
            .collect::<Vec<_>>(),
    );
    for r in 1..=max_len {
        let prev: &Vec<BigUint> = &table[r - 1];
        let row = (0..n)
            .map(|q| d.transitions(q).iter().map(|(_, t)| &prev[*t]).sum())
            .collect();
        table.push(row);
    }
    table
}

/// Exact number of accepted strings of length exactly `n`.
pub fn count_by_length(a: &SyncAutomaton, n: usize) -> BigUint {
    count_table(a, n).pop().unwrap_or_default()
}

/// Counts of accepted strings for every length `0..=max_len`.
pub fn count_table(a: &SyncAutomaton, max_len: usize) -> Vec<BigUint> {
    let d = determinize(a);
    let Some(&q0) = d.initial_states().first() else {
        return vec![BigUint::zero(); max_len + 1];
    };
    suffix_counts(&d, max_len)
        .into_iter()
        .map(|row| row[q0].clone())
        .collect()
}

/// All accepted tuples whose convolution has length at most `max_len`, in
/// length-lexicographic order of the convolution.
pub fn enumerate(a: &SyncAutomaton, max_len: usize) -> Vec<WordTuple> {
    let d = determinize(a);
    let Some(&q0) = d.initial_states().first() else {
        return Vec::new();
    };
    let n = d.num_states();
    // live[r][q]: some accepted suffix of length exactly r starts at q.
    let mut live = vec![(0..n).map(|q| d.is_accepting(q)).collect::<Vec<_>>()];
    for r in 1..=max_len {
        let row = (0..n)
            .map(|q| d.transitions(q).iter().any(|(_, t)| live[r - 1][*t]))
            .collect();
        live.push(row);
    }
    let mut out = Vec::new();
    let mut path: Vec<TapeVector> = Vec::new();
    for len in 0..=max_len {
        walk(&d, &live, q0, len, &mut path, &mut out);
    }
    out
}

fn walk(
    d: &SyncAutomaton,
    live: &[Vec<bool>],
    q: StateId,
    remaining: usize,
    path: &mut Vec<TapeVector>,
    out: &mut Vec<WordTuple>,
) {
    if !live[remaining][q] {
        return;
    }
    if remaining == 0 {
        let t = deconvolve(path, d.tapes()).expect("accepted strings are convolutions");
        out.push(t);
        return;
    }
    for (l, t) in d.transitions(q) {
        path.push(l.clone());
        walk(d, live, *t, remaining - 1, path, out);
        path.pop();
    }
}

fn below(bound: &BigUint, rng: &mut impl RngCore) -> BigUint {
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        let extra = (bytes as u64) * 8 - bits;
        if let Some(top) = buf.last_mut() {
            *top &= 0xffu8 >> extra;
        }
        let v = BigUint::from_bytes_le(&buf);
        if &v < bound {
            return v;
        }
    }
}

/// Uniformly random accepted string of length exactly `len`, or `None` when
/// there is none.
pub fn sample_uniform(
    a: &SyncAutomaton,
    len: usize,
    rng: &mut impl RngCore,
) -> Option<Vec<TapeVector>> {
    let d = determinize(a);
    let &q0 = d.initial_states().first()?;
    let table = suffix_counts(&d, len);
    if table[len][q0].is_zero() {
        return None;
    }
    let mut q = q0;
    let mut out = Vec::with_capacity(len);
    for r in (1..=len).rev() {
        let mut pick = below(&table[r][q], rng);
        for (l, t) in d.transitions(q) {
            let c = &table[r - 1][*t];
            if &pick < c {
                out.push(l.clone());
                q = *t;
                break;
            }
            pick -= c;
        }
    }
    Some(out)
}
