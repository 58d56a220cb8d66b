//! Constructors for common automata and for relations given by small
//! state machines.

use std::collections::HashMap;
use std::hash::Hash;

use super::{Alphabet, Symbol, SyncAutomaton, TapeVector, PAD};
use crate::error::Result;

/// Builds an automaton by exploring the states reachable from `initial`
/// through `successors`. The padding discipline is enforced afterwards.
pub fn explore<S, F, A>(
    tapes: usize,
    alphabet: &Alphabet,
    initial: impl IntoIterator<Item = S>,
    accepting: A,
    mut successors: F,
) -> Result<SyncAutomaton>
where
    S: Clone + Eq + Hash,
    F: FnMut(&S) -> Vec<(TapeVector, S)>,
    A: Fn(&S) -> bool,
{
    let mut ids: HashMap<S, usize> = HashMap::new();
    let mut states: Vec<S> = Vec::new();
    let mut intern = |s: S, states: &mut Vec<S>| -> usize {
        *ids.entry(s.clone()).or_insert_with(|| {
            states.push(s);
            states.len() - 1
        })
    };
    let init: Vec<usize> = initial.into_iter().map(|s| intern(s, &mut states)).collect();
    let mut transitions = Vec::new();
    let mut head = 0;
    while head < states.len() {
        let s = states[head].clone();
        for (l, t) in successors(&s) {
            let dst = intern(t, &mut states);
            transitions.push((head, l, dst));
        }
        head += 1;
    }
    let acc: Vec<usize> = (0..states.len()).filter(|&i| accepting(&states[i])).collect();
    SyncAutomaton::new(tapes, alphabet.clone(), states.len(), init, acc, transitions)
}

/// Every letter of the padded k-tuple alphabet except the all-pad one.
pub(crate) fn all_letters(tapes: usize, alphabet: &Alphabet) -> Vec<TapeVector> {
    let syms: Vec<Symbol> = alphabet.padded_symbols().collect();
    let mut out: Vec<Vec<Symbol>> = vec![Vec::new()];
    for _ in 0..tapes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                syms.iter().map(move |&s| {
                    let mut v = prefix.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out.into_iter()
        .map(TapeVector::new)
        .filter(|l| !l.is_all_pad())
        .collect()
}

/// The automaton accepting no string.
pub fn empty(tapes: usize, alphabet: &Alphabet) -> SyncAutomaton {
    SyncAutomaton::from_raw(tapes, alphabet.clone(), vec![], vec![], vec![], false)
}

/// All well-formed convolutions of `tapes` words.
pub fn universe(tapes: usize, alphabet: &Alphabet) -> SyncAutomaton {
    let letters = all_letters(tapes, alphabet);
    explore(tapes, alphabet, [0u64], |_| true, |&mask| {
        letters
            .iter()
            .filter(|l| (0..tapes).all(|i| mask & (1 << i) == 0 || l.is_pad(i)))
            .map(|l| {
                let m = (0..tapes).filter(|&i| l.is_pad(i)).fold(mask, |m, i| m | (1 << i));
                (l.clone(), m)
            })
            .collect()
    })
    .expect("universe construction is well-formed")
}

/// `Σ*` as a one-tape automaton.
pub fn all_words(alphabet: &Alphabet) -> SyncAutomaton {
    universe(1, alphabet)
}

/// One-tape automaton accepting exactly `word`.
pub fn single_string(alphabet: &Alphabet, word: &[Symbol]) -> Result<SyncAutomaton> {
    alphabet.check_word(word)?;
    let n = word.len();
    SyncAutomaton::new(
        1,
        alphabet.clone(),
        n + 1,
        [0],
        [n],
        word.iter()
            .enumerate()
            .map(|(i, &s)| (i, TapeVector::new([s]), i + 1)),
    )
}

/// Two-tape identity relation on `Σ*`.
pub fn identity(alphabet: &Alphabet) -> SyncAutomaton {
    letter_map(alphabet, Some)
}

/// Two-tape letter-to-letter relation `{(x, f(x))}` for a partial symbol map
/// applied position by position; inputs hitting `None` are rejected.
pub fn letter_map(alphabet: &Alphabet, f: impl Fn(Symbol) -> Option<Symbol>) -> SyncAutomaton {
    let transitions: Vec<_> = (0..alphabet.len() as Symbol)
        .filter_map(|s| f(s).map(|t| (0, TapeVector::new([s, t]), 0)))
        .collect();
    SyncAutomaton::new(2, alphabet.clone(), 1, [0], [0], transitions)
        .expect("letter maps are well-formed")
}

/// Relation inserting `sym` at exactly one position of the input. A position
/// qualifies when `guard(previous, next)` holds for the symbols around it
/// (`None` at the word boundaries).
pub fn insertion(
    alphabet: &Alphabet,
    sym: Symbol,
    guard: impl Fn(Option<Symbol>, Option<Symbol>) -> bool,
) -> SyncAutomaton {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum St {
        Before(Option<Symbol>),
        After(Symbol),
        Done,
    }
    let syms: Vec<Symbol> = (0..alphabet.len() as Symbol).collect();
    let pair = |a: Symbol, b: Symbol| TapeVector::new([a, b]);
    explore(2, alphabet, [St::Before(None)], |s| *s == St::Done, |s| {
        let mut out = Vec::new();
        match *s {
            St::Before(prev) => {
                for &c in &syms {
                    out.push((pair(c, c), St::Before(Some(c))));
                    if guard(prev, Some(c)) {
                        out.push((pair(c, sym), St::After(c)));
                    }
                }
                if guard(prev, None) {
                    out.push((pair(PAD, sym), St::Done));
                }
            }
            St::After(buffered) => {
                for &c in &syms {
                    out.push((pair(c, buffered), St::After(c)));
                }
                out.push((pair(PAD, buffered), St::Done));
            }
            St::Done => {}
        }
        out
    })
    .expect("insertion machines are well-formed")
}

/// Relation deleting one occurrence of `sym` from the input. An occurrence
/// qualifies when `guard(previous, next)` holds for its neighbours.
pub fn deletion(
    alphabet: &Alphabet,
    sym: Symbol,
    guard: impl Fn(Option<Symbol>, Option<Symbol>) -> bool,
) -> SyncAutomaton {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum St {
        Before(Option<Symbol>),
        // The output is one symbol ahead; the next input symbol must equal it.
        Pending(Symbol),
        Done,
    }
    let syms: Vec<Symbol> = (0..alphabet.len() as Symbol).collect();
    let pair = |a: Symbol, b: Symbol| TapeVector::new([a, b]);
    explore(2, alphabet, [St::Before(None)], |s| *s == St::Done, |s| {
        let mut out = Vec::new();
        match *s {
            St::Before(prev) => {
                for &c in &syms {
                    out.push((pair(c, c), St::Before(Some(c))));
                }
                for &next in &syms {
                    if guard(prev, Some(next)) {
                        out.push((pair(sym, next), St::Pending(next)));
                    }
                }
                if guard(prev, None) {
                    out.push((pair(sym, PAD), St::Done));
                }
            }
            St::Pending(expected) => {
                for &c in &syms {
                    out.push((pair(expected, c), St::Pending(c)));
                }
                out.push((pair(expected, PAD), St::Done));
            }
            St::Done => {}
        }
        out
    })
    .expect("deletion machines are well-formed")
}

/// Convolutions of `tapes` words in which the words on tapes `i` and `j`
/// differ.
pub fn diagonal_difference(
    tapes: usize,
    alphabet: &Alphabet,
    i: usize,
    j: usize,
) -> Result<SyncAutomaton> {
    let letters = all_letters(tapes, alphabet);
    explore(tapes, alphabet, [false], |&differ| differ, |&differ| {
        letters
            .iter()
            .map(|l| (l.clone(), differ || l.get(i) != l.get(j)))
            .collect()
    })
}
