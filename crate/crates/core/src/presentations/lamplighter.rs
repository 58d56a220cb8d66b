//! The lamplighter `ℤ₂ ≀ ℤ` with `S₁′ = {t, t⁻¹, h}`.
//!
//! A word lists the cells of the hull `[min(S ∪ {0, z}), max(S ∪ {0, z})]`
//! from left to right. Each cell is one of eight symbols recording its lamp,
//! whether it is the origin and whether the lighter stands on it. Both end
//! cells are essential (lit, origin or lighter), so the encoding is
//! canonical and `|w|` is the hull width.

use std::collections::BTreeSet;

use super::{generator_products, restrict_to_domain, GraphPresentation};
use crate::automata::{
    compose, deletion, explore, letter_map, minimize, transpose, union, Alphabet, Symbol,
    SyncAutomaton, TapeVector, Word, PAD,
};
use crate::error::Result;
use crate::oracles::Lamps;

/// Cell symbols indexed by `lamp | origin << 1 | head << 2`.
pub const LAMP_SYMBOLS: &str = "01oOhHbB";

const LAMP: Symbol = 1;
const ORIGIN: Symbol = 2;
const HEAD: Symbol = 4;
/// A dark cell that is neither origin nor under the lighter.
const BLANK: Symbol = 0;

pub fn lamplighter_alphabet() -> Alphabet {
    Alphabet::from_chars(LAMP_SYMBOLS).expect("fixed alphabet")
}

fn domain(alphabet: &Alphabet) -> SyncAutomaton {
    // (origin seen, head seen, last cell essential, non-empty)
    explore(
        1,
        alphabet,
        [(false, false, false, false)],
        |&(o, h, last, _)| o && h && last,
        |&(o, h, _, started)| {
            (0..8)
                .filter(|&s| started || s != BLANK)
                .filter(|&s| !(o && s & ORIGIN != 0) && !(h && s & HEAD != 0))
                .map(|s| {
                    (
                        TapeVector::new([s]),
                        (o || s & ORIGIN != 0, h || s & HEAD != 0, s != BLANK, true),
                    )
                })
                .collect()
        },
    )
    .expect("domain automaton is well-formed")
}

/// Moves the lighter one cell right, appending a cell when it stood on the
/// last one.
fn move_right(alphabet: &Alphabet) -> SyncAutomaton {
    #[derive(Clone, PartialEq, Eq, Hash)]
    enum St {
        Before,
        Carry,
        After,
        Appended,
    }
    let pair = |a: Symbol, b: Symbol| TapeVector::new([a, b]);
    explore(2, alphabet, [St::Before], |s| matches!(s, St::After | St::Appended), |s| match s {
        St::Before => (0..8)
            .map(|c| {
                if c & HEAD == 0 {
                    (pair(c, c), St::Before)
                } else {
                    (pair(c, c & !HEAD), St::Carry)
                }
            })
            .collect(),
        St::Carry => (0..8)
            .filter(|c| c & HEAD == 0)
            .map(|c| (pair(c, c | HEAD), St::After))
            .chain([(pair(PAD, HEAD), St::Appended)])
            .collect(),
        St::After => (0..8).map(|c| (pair(c, c), St::After)).collect(),
        St::Appended => Vec::new(),
    })
    .expect("move machine is well-formed")
}

/// Drops a leading blank cell; leaves words with an essential first cell.
fn normalize_left(alphabet: &Alphabet) -> Result<SyncAutomaton> {
    let drop = deletion(alphabet, BLANK, |prev, _| prev.is_none());
    let keep = explore(2, alphabet, [false], |&started| started, |&started| {
        (0..8)
            .filter(|&c| started || c != BLANK)
            .map(|c| (TapeVector::new([c, c]), true))
            .collect()
    })?;
    union(&drop, &keep)
}

pub fn lamplighter_presentation() -> Result<GraphPresentation> {
    let alphabet = lamplighter_alphabet();
    let dom = minimize(&domain(&alphabet));
    let t = restrict_to_domain(&compose(&move_right(&alphabet), &normalize_left(&alphabet)?)?, &dom)?;
    let t_inv = minimize(&transpose(&t)?);
    let toggle = letter_map(&alphabet, |c| Some(if c & HEAD != 0 { c ^ LAMP } else { c }));
    let h = restrict_to_domain(&toggle, &dom)?;
    GraphPresentation::new(
        "lamplighter",
        dom,
        vec![t, t_inv, h],
        vec!["t".into(), "T".into(), "h".into()],
        Some(vec![1, 0, 2]),
        lamplighter_encode(&Lamps {
            lit: BTreeSet::new(),
            pos: 0,
        }),
    )
}

/// Label paths over `S₁′` realizing `S₁ = {t, th, ht, hth}^{±1}`, in the
/// order used by the `S₁` oracle.
pub const S1_PATHS: [(&str, &[usize]); 8] = [
    ("t", &[0]),
    ("th", &[0, 2]),
    ("ht", &[2, 0]),
    ("hth", &[2, 0, 2]),
    ("T", &[1]),
    ("hT", &[2, 1]),
    ("Th", &[1, 2]),
    ("hTh", &[2, 1, 2]),
];

/// The same domain with the eight composite generators of `S₁`.
pub fn lamplighter_s1_presentation() -> Result<GraphPresentation> {
    let base = lamplighter_presentation()?;
    let gens: Vec<(String, Vec<usize>)> = S1_PATHS
        .iter()
        .map(|(n, p)| (n.to_string(), p.to_vec()))
        .collect();
    let mut p = generator_products(&base, &gens, Some((0..8).map(|j| (j + 4) % 8).collect()))?;
    p.set_name("lamplighter-s1");
    Ok(p)
}

pub fn lamplighter_encode(g: &Lamps<i64>) -> Word {
    let lo = g.lit.first().copied().unwrap_or(0).min(0).min(g.pos);
    let hi = g.lit.last().copied().unwrap_or(0).max(0).max(g.pos);
    (lo..=hi)
        .map(|c| {
            let mut s = 0;
            if g.lit.contains(&c) {
                s |= LAMP;
            }
            if c == 0 {
                s |= ORIGIN;
            }
            if c == g.pos {
                s |= HEAD;
            }
            s
        })
        .collect()
}

/// Element of a domain word; `None` outside the domain.
pub fn lamplighter_decode(w: &[Symbol]) -> Option<Lamps<i64>> {
    let origin = w.iter().position(|&s| s & ORIGIN != 0)? as i64;
    let head = w.iter().position(|&s| s & HEAD != 0)? as i64;
    let valid = w.iter().all(|&s| s < 8)
        && w.iter().filter(|&&s| s & ORIGIN != 0).count() == 1
        && w.iter().filter(|&&s| s & HEAD != 0).count() == 1
        && w.first() != Some(&BLANK)
        && w.last() != Some(&BLANK);
    if !valid {
        return None;
    }
    Some(Lamps {
        lit: w
            .iter()
            .enumerate()
            .filter(|(_, &s)| s & LAMP != 0)
            .map(|(i, _)| i as i64 - origin)
            .collect(),
        pos: head - origin,
    })
}
