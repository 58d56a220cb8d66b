//! ℤᵐ: a word is the concatenation of one unary block per coordinate, in
//! coordinate order, written with the positive or negative letter of that
//! coordinate. The word length is the ℓ¹ norm.

use super::{restrict_to_domain, GraphPresentation};
use crate::automata::{
    deletion, explore, insertion, minimize, transpose, union, Alphabet, Symbol, SyncAutomaton,
    TapeVector, Word,
};
use crate::error::{Error, Result};

pub fn zm_alphabet(m: usize) -> Result<Alphabet> {
    match m {
        0 => Err(Error::InvalidArgument("ℤ^m needs m ≥ 1".into())),
        1 => Alphabet::from_chars("pn"),
        2..=26 => {
            let pos: String = (0..m).map(|i| (b'a' + i as u8) as char).collect();
            Alphabet::from_chars(&(pos.clone() + &pos.to_uppercase()))
        }
        _ => Err(Error::InvalidArgument(format!("ℤ^m needs m ≤ 26, got {m}"))),
    }
}

fn coord(m: usize, s: Symbol) -> usize {
    s as usize % m
}

fn domain(m: usize, alphabet: &Alphabet) -> SyncAutomaton {
    let syms: Vec<Symbol> = (0..alphabet.len() as Symbol).collect();
    explore(1, alphabet, [None::<Symbol>], |_| true, |prev| {
        syms.iter()
            .filter(|&&s| match *prev {
                None => true,
                Some(p) => s == p || coord(m, s) > coord(m, p),
            })
            .map(|&s| (TapeVector::new([s]), Some(s)))
            .collect()
    })
    .expect("domain automaton is well-formed")
}

/// Edge relation for `+e_i`.
fn plus_edge(m: usize, i: usize, alphabet: &Alphabet, dom: &SyncAutomaton) -> Result<SyncAutomaton> {
    let pos = i as Symbol;
    let neg = (m + i) as Symbol;
    let later = move |s: Option<Symbol>| s.is_none_or(|s| coord(m, s) > i);
    // Grow a non-negative block at its end ...
    let grow = insertion(alphabet, pos, move |prev, next| {
        prev.is_none_or(|p| coord(m, p) < i || p == pos) && later(next)
    });
    // ... or shrink a negative block.
    let shrink = deletion(alphabet, neg, move |_, next| later(next));
    restrict_to_domain(&union(&grow, &shrink)?, dom)
}

pub fn zm_presentation(m: usize) -> Result<GraphPresentation> {
    let alphabet = zm_alphabet(m)?;
    let dom = minimize(&domain(m, &alphabet));
    let plus: Vec<SyncAutomaton> = (0..m)
        .map(|i| plus_edge(m, i, &alphabet, &dom))
        .collect::<Result<_>>()?;
    let minus: Vec<SyncAutomaton> = plus.iter().map(|e| transpose(e).map(|t| minimize(&t))).collect::<Result<_>>()?;
    let labels = alphabet.symbols().to_vec();
    let inverse = (0..2 * m).map(|j| (j + m) % (2 * m)).collect();
    GraphPresentation::new(
        format!("z{m}"),
        dom,
        plus.into_iter().chain(minus).collect(),
        labels,
        Some(inverse),
        Word::new(),
    )
}

/// Representative of a lattice point.
pub fn zm_encode(v: &[i64]) -> Word {
    let m = v.len();
    let mut w = Word::new();
    for (i, &x) in v.iter().enumerate() {
        let s = if x >= 0 { i } else { m + i } as Symbol;
        w.extend(std::iter::repeat_n(s, x.unsigned_abs() as usize));
    }
    w
}

/// Lattice point of a word; `None` outside the domain.
pub fn zm_decode(m: usize, w: &[Symbol]) -> Option<Vec<i64>> {
    let mut v = vec![0i64; m];
    let mut last: Option<Symbol> = None;
    for &s in w {
        if s as usize >= 2 * m {
            return None;
        }
        if let Some(p) = last {
            if !(s == p || coord(m, s) > coord(m, p)) {
                return None;
            }
        }
        v[coord(m, s)] += if (s as usize) < m { 1 } else { -1 };
        last = Some(s);
    }
    Some(v)
}
