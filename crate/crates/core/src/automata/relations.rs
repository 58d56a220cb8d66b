//! Functional two-tape relations: functionality checks, image extraction and
//! the length-difference bound.

use std::collections::BTreeMap;

use super::ops::same_alphabet;
use super::{
    all_words, complement, cylindrify, deconvolve, diagonal_difference, intersect, minimize,
    project, shortest_accepted, StateId, Symbol, SyncAutomaton, Word, PAD,
};
use crate::error::{Error, Result};

/// Why a relation fails to be a function on a domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctionalityWitness {
    /// A domain word without any image.
    NotTotal { input: Word },
    /// A domain word with two distinct images.
    Ambiguous { input: Word, first: Word, second: Word },
}

fn check_relation(r: &SyncAutomaton) -> Result<()> {
    if r.tapes() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            actual: r.tapes(),
        });
    }
    Ok(())
}

/// Shortest witness that `r` is not a total function on `domain`, if any.
pub fn functionality_witness(
    r: &SyncAutomaton,
    domain: &SyncAutomaton,
) -> Result<Option<FunctionalityWitness>> {
    check_relation(r)?;
    if domain.tapes() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            actual: domain.tapes(),
        });
    }
    same_alphabet(r.alphabet(), domain.alphabet())?;

    let inputs = project(r, &[0])?;
    let uncovered = intersect(domain, &complement(&inputs, &all_words(r.alphabet()))?)?;
    if let Some(s) = shortest_accepted(&uncovered) {
        let input = deconvolve(&s, 1)?.0.swap_remove(0);
        return Ok(Some(FunctionalityWitness::NotTotal { input }));
    }

    let restricted = minimize(&intersect(r, &cylindrify(domain, 1)?)?);
    let xyz = intersect(&cylindrify(&restricted, 2)?, &cylindrify(&restricted, 1)?)?;
    let twins = intersect(&xyz, &diagonal_difference(3, r.alphabet(), 1, 2)?)?;
    if let Some(s) = shortest_accepted(&twins) {
        let mut t = deconvolve(&s, 3)?.0;
        let second = t.pop().unwrap_or_default();
        let first = t.pop().unwrap_or_default();
        let input = t.pop().unwrap_or_default();
        return Ok(Some(FunctionalityWitness::Ambiguous {
            input,
            first,
            second,
        }));
    }
    Ok(None)
}

/// True iff every word of `domain` has exactly one image under `r`.
pub fn check_functional(r: &SyncAutomaton, domain: &SyncAutomaton) -> Result<bool> {
    Ok(functionality_witness(r, domain)?.is_none())
}

/// Product of `r` with the single input `x`, unrolled into layers. Layer `t`
/// holds the states reached after `t` letters; past the end of `x` the input
/// tape reads padding. The unrolling stops after `|x| + states` layers, the
/// longest an output can outgrow its input in a relation without a padding
/// cycle on the input tape.
struct Unrolled<'a> {
    r: &'a SyncAutomaton,
    x: &'a [Symbol],
    useful: Vec<Vec<bool>>,
}

impl<'a> Unrolled<'a> {
    fn new(r: &'a SyncAutomaton, x: &'a [Symbol]) -> Self {
        let n = r.num_states();
        let layers = x.len() + n + 1;
        let mut forward = vec![vec![false; n]];
        for &q in r.initial_states() {
            forward[0][q] = true;
        }
        for t in 0..layers - 1 {
            let mut next = vec![false; n];
            let mut any = false;
            for q in (0..n).filter(|&q| forward[t][q]) {
                for (_, d) in by_input(r, q, input_at(x, t)) {
                    next[*d] = true;
                    any = true;
                }
            }
            forward.push(next);
            if !any {
                break;
            }
        }
        let mut useful = vec![vec![false; n]; forward.len()];
        for t in (0..forward.len()).rev() {
            for q in (0..n).filter(|&q| forward[t][q]) {
                let ends = t >= x.len() && r.is_accepting(q);
                let continues = t + 1 < useful.len()
                    && by_input(r, q, input_at(x, t)).any(|(_, d)| useful[t + 1][*d]);
                useful[t][q] = ends || continues;
            }
        }
        Unrolled { r, x, useful }
    }

    fn start(&self) -> Vec<StateId> {
        (0..self.r.num_states()).filter(|&q| self.useful[0][q]).collect()
    }

    /// Whether an output may end at layer `t` from `set`, and the useful
    /// successor sets grouped by the output symbol written.
    fn branches(&self, t: usize, set: &[StateId]) -> (bool, BTreeMap<Symbol, Vec<StateId>>) {
        let ends = t >= self.x.len() && set.iter().any(|&q| self.r.is_accepting(q));
        let mut groups: BTreeMap<Symbol, Vec<StateId>> = BTreeMap::new();
        if t + 1 < self.useful.len() {
            for &q in set {
                for (l, d) in by_input(self.r, q, input_at(self.x, t)) {
                    if self.useful[t + 1][*d] {
                        groups.entry(l.get(1)).or_default().push(*d);
                    }
                }
            }
        }
        for v in groups.values_mut() {
            v.sort_unstable();
            v.dedup();
        }
        (ends, groups)
    }

    /// Follows the first branch at every layer until an output ends.
    fn complete(&self, mut t: usize, mut set: Vec<StateId>, mut prefix: Word) -> Word {
        loop {
            let (ends, mut groups) = self.branches(t, &set);
            if ends {
                return prefix;
            }
            let Some((sym, next)) = groups.pop_first() else {
                return prefix;
            };
            if sym != PAD {
                prefix.push(sym);
            }
            set = next;
            t += 1;
        }
    }
}

fn input_at(x: &[Symbol], t: usize) -> Symbol {
    x.get(t).copied().unwrap_or(PAD)
}

/// Transitions of `q` whose input-tape entry is `sym`.
fn by_input(
    r: &SyncAutomaton,
    q: StateId,
    sym: Symbol,
) -> impl Iterator<Item = &(super::TapeVector, StateId)> {
    let ts = r.transitions(q);
    let start = ts.partition_point(|(l, _)| l.get(0) < sym);
    let end = start + ts[start..].partition_point(|(l, _)| l.get(0) <= sym);
    ts[start..end].iter()
}

/// The unique `y` with `(x, y)` accepted by `r`.
pub fn unique_image(r: &SyncAutomaton, x: &[Symbol]) -> Result<Word> {
    check_relation(r)?;
    r.alphabet().check_word(x)?;
    let u = Unrolled::new(r, x);
    let mut set = u.start();
    if set.is_empty() {
        return Err(Error::NotInDomain(r.alphabet().render_word(x)));
    }
    let mut prefix = Word::new();
    let mut t = 0;
    loop {
        let (ends, mut groups) = u.branches(t, &set);
        if ends && groups.is_empty() {
            return Ok(prefix);
        }
        if ends || groups.len() > 1 {
            let first = if ends {
                prefix.clone()
            } else {
                let (sym, next) = groups.pop_first().expect("two groups");
                u.complete(t + 1, next, extend(&prefix, sym))
            };
            let (sym, next) = groups.pop_first().expect("another branch");
            let second = u.complete(t + 1, next, extend(&prefix, sym));
            let render = |w: &[Symbol]| r.alphabet().render_word(w);
            return Err(Error::FunctionalityViolation {
                input: render(x),
                first: render(&first),
                second: render(&second),
            });
        }
        let Some((sym, next)) = groups.pop_first() else {
            // Only reachable when the unrolling was cut off by a padding cycle.
            return Err(Error::NotBounded);
        };
        if sym != PAD {
            prefix.push(sym);
        }
        set = next;
        t += 1;
    }
}

fn extend(prefix: &[Symbol], sym: Symbol) -> Word {
    let mut w = prefix.to_vec();
    if sym != PAD {
        w.push(sym);
    }
    w
}

/// All `y` with `(x, y)` accepted by `r` and `|y| ≤ |x| + states(r)`, in
/// length-lexicographic order.
pub fn images(r: &SyncAutomaton, x: &[Symbol]) -> Result<Vec<Word>> {
    check_relation(r)?;
    r.alphabet().check_word(x)?;
    let u = Unrolled::new(r, x);
    let mut out = Vec::new();
    let mut stack = vec![(0usize, u.start(), Word::new())];
    while let Some((t, set, prefix)) = stack.pop() {
        if set.is_empty() {
            continue;
        }
        let (ends, groups) = u.branches(t, &set);
        if ends {
            out.push(prefix.clone());
        }
        for (sym, next) in groups {
            stack.push((t + 1, next, extend(&prefix, sym)));
        }
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out.dedup();
    Ok(out)
}

/// Least `c` with `|y| ≤ |x| + c` for every accepted `(x, y)`: the longest
/// run of steps on which the input tape reads padding.
pub fn length_difference_bound(r: &SyncAutomaton) -> Result<usize> {
    check_relation(r)?;
    let n = r.num_states();
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut mark = vec![0u8; n];
    let mut longest = vec![0usize; n];
    for root in 0..n {
        if mark[root] != 0 {
            continue;
        }
        let mut stack: Vec<(StateId, usize)> = vec![(root, 0)];
        mark[root] = 1;
        while let Some(&mut (q, ref mut i)) = stack.last_mut() {
            let pads: Vec<StateId> = r
                .transitions(q)
                .iter()
                .filter(|(l, _)| l.is_pad(0))
                .map(|(_, d)| *d)
                .collect();
            if *i < pads.len() {
                let d = pads[*i];
                *i += 1;
                match mark[d] {
                    0 => {
                        mark[d] = 1;
                        stack.push((d, 0));
                    }
                    1 => return Err(Error::NotBounded),
                    _ => {}
                }
            } else {
                longest[q] = pads.iter().map(|&d| longest[d] + 1).max().unwrap_or(0);
                mark[q] = 2;
                stack.pop();
            }
        }
    }
    Ok(longest.into_iter().max().unwrap_or(0))
}
