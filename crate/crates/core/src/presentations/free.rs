//! Free groups: the domain is the set of reduced words and each edge appends
//! a letter with last-letter cancellation.

use super::{restrict_to_domain, GraphPresentation};
use crate::automata::{
    deletion, explore, insertion, minimize, union, Alphabet, Symbol, TapeVector, Word,
};
use crate::error::{Error, Result};

pub fn free_alphabet(m: usize) -> Result<Alphabet> {
    if !(1..=26).contains(&m) {
        return Err(Error::InvalidArgument(format!("F_m needs 1 ≤ m ≤ 26, got {m}")));
    }
    let pos: String = (0..m).map(|i| (b'a' + i as u8) as char).collect();
    Alphabet::from_chars(&(pos.clone() + &pos.to_uppercase()))
}

fn inverse(m: usize, s: Symbol) -> Symbol {
    ((s as usize + m) % (2 * m)) as Symbol
}

pub fn free_group_presentation(m: usize) -> Result<GraphPresentation> {
    let alphabet = free_alphabet(m)?;
    let syms: Vec<Symbol> = (0..2 * m as Symbol).collect();
    let dom = minimize(
        &explore(1, &alphabet, [None::<Symbol>], |_| true, |prev| {
            syms.iter()
                .filter(|&&s| prev.is_none_or(|p| s != inverse(m, p)))
                .map(|&s| (TapeVector::new([s]), Some(s)))
                .collect()
        })?,
    );
    let edges = syms
        .iter()
        .map(|&g| {
            let gi = inverse(m, g);
            let append = insertion(&alphabet, g, move |prev, next| {
                next.is_none() && prev != Some(gi)
            });
            let cancel = deletion(&alphabet, gi, |_, next| next.is_none());
            restrict_to_domain(&union(&append, &cancel)?, &dom)
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = alphabet.symbols().to_vec();
    let pairing = (0..2 * m).map(|j| (j + m) % (2 * m)).collect();
    GraphPresentation::new(format!("f{m}"), dom, edges, labels, Some(pairing), Word::new())
}

/// Reduced word of a free-group element in the oracle's letter convention
/// (`i + 1` for generator `i`, negative for inverses).
pub fn free_encode(m: usize, letters: &[i32]) -> Word {
    letters
        .iter()
        .map(|&x| {
            let i = x.unsigned_abs() as usize - 1;
            (if x > 0 { i } else { i + m }) as Symbol
        })
        .collect()
}

pub fn free_decode(m: usize, w: &[Symbol]) -> Vec<i32> {
    w.iter()
        .map(|&s| {
            let s = s as i32;
            if (s as usize) < m {
                s + 1
            } else {
                -(s - m as i32 + 1)
            }
        })
        .collect()
}
