//! Growth, Følner and average-length characteristics of a transducer and a
//! base word.

mod avglen;
mod folner;
mod growth;

use std::cmp::Ordering;

pub use avglen::{avg_length_exact, avg_length_mc, AvgLengthRecord, AvgLengthSeries, McEstimate};
pub use folner::{
    ball_family, boundary, folner_exact, folner_ratio, folner_upper, interval_family,
    lamplighter_rectangle_family, words_from_paths, FolnerReport, DEFAULT_NODE_BUDGET,
};
pub use growth::{ball_words, growth, growth_from, GrowthRecord};

use crate::automata::Symbol;

/// Shorter words first, then lexicographic.
pub fn length_lex(a: &[Symbol], b: &[Symbol]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}
