//! Synchronous k-tape finite automata over padded alphabets.
//!
//! A k-tape synchronous automaton reads the convolution `w1 ⊗ … ⊗ wk` of a
//! tuple of words: the i-th letter is the tuple of the i-th symbols of each
//! word, with shorter words padded by a reserved symbol. Every automaton in
//! this crate is kept trimmed and canonically numbered (breadth-first
//! discovery order, transitions sorted by letter), so structurally equal
//! automata compare equal with `==`.

mod build;
mod count;
mod format;
mod ops;
mod relations;

use std::fmt;

use crate::error::{Error, Result};

pub use build::{
    all_words, deletion, diagonal_difference, empty, explore, identity, insertion, letter_map,
    single_string, universe,
};
pub use count::{count_by_length, count_table, enumerate, sample_uniform};
pub use format::{from_atm, to_atm, to_dot};
pub use ops::{
    complement, compose, cylindrify, determinize, equivalent, intersect, minimize,
    permute_tapes, project, reverse, shortest_accepted, transpose, union,
};
pub use relations::{
    check_functional, functionality_witness, images, length_difference_bound, unique_image,
    FunctionalityWitness,
};

/// Index of a symbol in its [`Alphabet`].
pub type Symbol = u8;

/// The reserved padding symbol `◇`, rendered `_` in text formats.
pub const PAD: Symbol = Symbol::MAX;

/// A word over an alphabet, stored as symbol indices. Never contains [`PAD`].
pub type Word = Vec<Symbol>;

/// State index inside a [`SyncAutomaton`].
pub type StateId = usize;

/// Ordered finite list of distinct symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::InvalidArgument("alphabet must not be empty".into()));
        }
        if symbols.len() >= PAD as usize {
            return Err(Error::InvalidArgument(format!(
                "alphabet too large ({} symbols, at most {})",
                symbols.len(),
                PAD as usize - 1
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            let bad = s.is_empty()
                || s == "_"
                || s.chars()
                    .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | '#' | '_'));
            if bad {
                return Err(Error::InvalidArgument(format!("invalid symbol name {s:?}")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::InvalidArgument(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Alphabet whose symbols are the characters of `chars`, in order.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Alphabet::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|s| s == name)
            .map(|i| i as Symbol)
    }

    /// Symbol name, with `_` for the padding symbol.
    pub fn name(&self, sym: Symbol) -> &str {
        if sym == PAD {
            "_"
        } else {
            &self.symbols[sym as usize]
        }
    }

    /// True when every symbol is a single character, so words can be written
    /// without separators.
    pub fn is_single_char(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Symbols of the alphabet followed by the padding symbol.
    pub fn padded_symbols(&self) -> impl Iterator<Item = Symbol> + Clone {
        (0..self.len() as Symbol).chain(std::iter::once(PAD))
    }

    /// Parses a word. Single-character alphabets read one symbol per
    /// character; otherwise symbols are whitespace separated. `""` and `ε`
    /// denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Word::new());
        }
        let lookup = |tok: &str| {
            self.index_of(tok)
                .ok_or_else(|| Error::AlphabetMismatch(format!("unknown symbol {tok:?}")))
        };
        if self.is_single_char() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| lookup(c.encode_utf8(&mut [0; 4])))
                .collect()
        } else {
            text.split_whitespace().map(lookup).collect()
        }
    }

    pub fn render_word(&self, word: &[Symbol]) -> String {
        let sep = if self.is_single_char() { "" } else { " " };
        word.iter()
            .map(|&s| self.name(s))
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn check_word(&self, word: &[Symbol]) -> Result<()> {
        match word.iter().find(|&&s| s as usize >= self.len()) {
            Some(&s) => Err(Error::AlphabetMismatch(format!(
                "symbol index {s} outside alphabet of size {}",
                self.len()
            ))),
            None => Ok(()),
        }
    }

    /// Convolution of a word tuple; see [`convolve`].
    pub fn convolve(&self, words: &WordTuple) -> Result<Vec<TapeVector>> {
        for w in &words.0 {
            self.check_word(w)?;
        }
        Ok(convolve(words))
    }
}

/// One letter of a k-tape automaton: a k-tuple over the padded alphabet,
/// never all padding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TapeVector(Box<[Symbol]>);

impl TapeVector {
    pub fn new(entries: impl Into<Box<[Symbol]>>) -> Self {
        TapeVector(entries.into())
    }

    pub fn entries(&self) -> &[Symbol] {
        &self.0
    }

    pub fn tapes(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, tape: usize) -> Symbol {
        self.0[tape]
    }

    pub fn is_all_pad(&self) -> bool {
        self.0.iter().all(|&s| s == PAD)
    }

    pub fn is_pad(&self, tape: usize) -> bool {
        self.0[tape] == PAD
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&s| alphabet.name(s)).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Debug for TapeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, &s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if s == PAD {
                f.write_str("◇")?;
            } else {
                write!(f, "{s}")?;
            }
        }
        f.write_str(")")
    }
}

/// A tuple of words read in lockstep by a multi-tape automaton.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WordTuple(pub Vec<Word>);

impl WordTuple {
    pub fn new(words: Vec<Word>) -> Self {
        WordTuple(words)
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn words(&self) -> &[Word] {
        &self.0
    }
}

impl From<Vec<Word>> for WordTuple {
    fn from(words: Vec<Word>) -> Self {
        WordTuple(words)
    }
}

/// Interleaves the words of a tuple, padding shorter words with [`PAD`].
pub fn convolve(words: &WordTuple) -> Vec<TapeVector> {
    let len = words.0.iter().map(Vec::len).max().unwrap_or(0);
    (0..len)
        .map(|t| {
            TapeVector::new(
                words
                    .0
                    .iter()
                    .map(|w| w.get(t).copied().unwrap_or(PAD))
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}

/// Inverse of [`convolve`]; rejects strings where a tape reads a symbol
/// after padding.
pub fn deconvolve(string: &[TapeVector], tapes: usize) -> Result<WordTuple> {
    let mut words = vec![Word::new(); tapes];
    let mut ended = vec![false; tapes];
    for (pos, letter) in string.iter().enumerate() {
        if letter.tapes() != tapes {
            return Err(Error::ArityMismatch {
                expected: tapes,
                actual: letter.tapes(),
            });
        }
        if letter.is_all_pad() {
            return Err(Error::MalformedConvolution { tape: 0, position: pos });
        }
        for (tape, &s) in letter.entries().iter().enumerate() {
            if s == PAD {
                ended[tape] = true;
            } else if ended[tape] {
                return Err(Error::MalformedConvolution { tape, position: pos });
            } else {
                words[tape].push(s);
            }
        }
    }
    Ok(WordTuple(words))
}

/// A k-tape synchronous nondeterministic finite automaton.
///
/// Values are immutable; every operation returns a fresh automaton in trimmed,
/// canonically numbered form. Unless [`SyncAutomaton::is_relaxed`] holds, every
/// accepted string is a well-formed convolution.
#[derive(Clone, PartialEq, Eq)]
pub struct SyncAutomaton {
    tapes: usize,
    alphabet: Alphabet,
    initial: Vec<StateId>,
    accepting: Vec<bool>,
    delta: Vec<Vec<(TapeVector, StateId)>>,
    relaxed: bool,
}

impl SyncAutomaton {
    /// Builds an automaton from explicit parts, enforcing the padding
    /// discipline, trimming and renumbering canonically.
    pub fn new(
        tapes: usize,
        alphabet: Alphabet,
        num_states: usize,
        initial: impl IntoIterator<Item = StateId>,
        accepting: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, TapeVector, StateId)>,
    ) -> Result<Self> {
        Self::build(tapes, alphabet, num_states, initial, accepting, transitions, false)
    }

    /// Like [`SyncAutomaton::new`] but without padding enforcement; used for
    /// reversed languages.
    pub fn new_relaxed(
        tapes: usize,
        alphabet: Alphabet,
        num_states: usize,
        initial: impl IntoIterator<Item = StateId>,
        accepting: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, TapeVector, StateId)>,
    ) -> Result<Self> {
        Self::build(tapes, alphabet, num_states, initial, accepting, transitions, true)
    }

    fn build(
        tapes: usize,
        alphabet: Alphabet,
        num_states: usize,
        initial: impl IntoIterator<Item = StateId>,
        accepting: impl IntoIterator<Item = StateId>,
        transitions: impl IntoIterator<Item = (StateId, TapeVector, StateId)>,
        relaxed: bool,
    ) -> Result<Self> {
        if tapes == 0 {
            return Err(Error::InvalidArgument("automaton needs at least one tape".into()));
        }
        let check_state = |q: StateId| {
            if q < num_states {
                Ok(q)
            } else {
                Err(Error::InvalidArgument(format!(
                    "state {q} out of range (automaton has {num_states} states)"
                )))
            }
        };
        let initial = initial.into_iter().map(check_state).collect::<Result<Vec<_>>>()?;
        let mut acc = vec![false; num_states];
        for q in accepting {
            acc[check_state(q)?] = true;
        }
        let mut delta = vec![Vec::new(); num_states];
        for (src, letter, dst) in transitions {
            check_state(src)?;
            check_state(dst)?;
            if letter.tapes() != tapes {
                return Err(Error::ArityMismatch {
                    expected: tapes,
                    actual: letter.tapes(),
                });
            }
            if letter.is_all_pad() {
                return Err(Error::InvalidArgument("all-pad letter is not allowed".into()));
            }
            if let Some(&s) = letter
                .entries()
                .iter()
                .find(|&&s| s != PAD && s as usize >= alphabet.len())
            {
                return Err(Error::AlphabetMismatch(format!(
                    "letter uses symbol {s} outside alphabet of size {}",
                    alphabet.len()
                )));
            }
            delta[src].push((letter, dst));
        }
        let raw = SyncAutomaton {
            tapes,
            alphabet,
            initial,
            accepting: acc,
            delta,
            relaxed,
        };
        Ok(if relaxed {
            raw.normalized()
        } else {
            raw.enforce_padding()
        })
    }

    /// Internal constructor for operations that preserve the padding
    /// discipline; trims and renumbers.
    pub(crate) fn from_raw(
        tapes: usize,
        alphabet: Alphabet,
        initial: Vec<StateId>,
        accepting: Vec<bool>,
        delta: Vec<Vec<(TapeVector, StateId)>>,
        relaxed: bool,
    ) -> Self {
        SyncAutomaton {
            tapes,
            alphabet,
            initial,
            accepting,
            delta,
            relaxed,
        }
        .normalized()
    }

    pub fn tapes(&self) -> usize {
        self.tapes
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.delta.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.delta.iter().map(Vec::len).sum()
    }

    pub fn initial_states(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting[q]
    }

    pub fn accepting_states(&self) -> impl Iterator<Item = StateId> + '_ {
        (0..self.num_states()).filter(|&q| self.accepting[q])
    }

    /// Outgoing transitions of `q`, sorted by letter then target.
    pub fn transitions(&self, q: StateId) -> &[(TapeVector, StateId)] {
        &self.delta[q]
    }

    /// True for automata produced by [`reverse`], whose strings need not be
    /// well-formed convolutions.
    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    pub fn is_empty(&self) -> bool {
        // Trimmed form: any remaining state lies on an accepting path.
        self.delta.is_empty()
    }

    pub fn is_deterministic(&self) -> bool {
        self.initial.len() <= 1
            && self
                .delta
                .iter()
                .all(|ts| ts.windows(2).all(|w| w[0].0 != w[1].0))
    }

    fn check_arity(&self, arity: usize) -> Result<()> {
        if arity == self.tapes {
            Ok(())
        } else {
            Err(Error::ArityMismatch {
                expected: self.tapes,
                actual: arity,
            })
        }
    }

    /// Standard nondeterministic acceptance of a string of letters.
    pub fn run(&self, string: &[TapeVector]) -> bool {
        let n = self.num_states();
        let mut current = vec![false; n];
        for &q in &self.initial {
            current[q] = true;
        }
        for letter in string {
            let mut next = vec![false; n];
            let mut any = false;
            for q in (0..n).filter(|&q| current[q]) {
                for (l, dst) in self.lookup(q, letter) {
                    debug_assert_eq!(l, letter);
                    next[*dst] = true;
                    any = true;
                }
            }
            if !any {
                return false;
            }
            current = next;
        }
        (0..n).any(|q| current[q] && self.accepting[q])
    }

    /// Transitions of `q` labelled exactly `letter`.
    pub(crate) fn lookup<'a>(
        &'a self,
        q: StateId,
        letter: &TapeVector,
    ) -> std::slice::Iter<'a, (TapeVector, StateId)> {
        let ts = &self.delta[q];
        let start = ts.partition_point(|(l, _)| l < letter);
        let end = start + ts[start..].partition_point(|(l, _)| l <= letter);
        ts[start..end].iter()
    }

    /// True iff the automaton accepts the convolution of `words`.
    pub fn accepts(&self, words: &WordTuple) -> Result<bool> {
        self.check_arity(words.arity())?;
        let string = self.alphabet.convolve(words)?;
        Ok(self.run(&string))
    }

    /// Convenience for one-tape automata.
    pub fn accepts_word(&self, word: &[Symbol]) -> bool {
        debug_assert_eq!(self.tapes, 1);
        let string: Vec<TapeVector> = word.iter().map(|&s| TapeVector::new([s])).collect();
        word.iter().all(|&s| s != PAD) && self.run(&string)
    }
}

impl fmt::Debug for SyncAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SyncAutomaton")
            .field("tapes", &self.tapes)
            .field("alphabet", &self.alphabet.symbols)
            .field("states", &self.num_states())
            .field("transitions", &self.num_transitions())
            .field("relaxed", &self.relaxed)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn convolve_pads_shorter_words() {
        let a = ab();
        let t = WordTuple(vec![a.parse_word("ab").unwrap(), a.parse_word("a").unwrap()]);
        let s = convolve(&t);
        assert_eq!(s, vec![TapeVector::new([0, 0]), TapeVector::new([1, PAD])]);
        assert_eq!(deconvolve(&s, 2).unwrap(), t);
    }

    #[test]
    fn convolve_three_words() {
        let a = Alphabet::from_chars("abc").unwrap();
        let t = WordTuple(vec![
            a.parse_word("abc").unwrap(),
            a.parse_word("ab").unwrap(),
            a.parse_word("a").unwrap(),
        ]);
        let s = convolve(&t);
        assert_eq!(
            s,
            vec![
                TapeVector::new([0, 0, 0]),
                TapeVector::new([1, 1, PAD]),
                TapeVector::new([2, PAD, PAD]),
            ]
        );
    }

    #[test]
    fn empty_convolution() {
        let t = WordTuple(vec![vec![], vec![]]);
        assert!(convolve(&t).is_empty());
        assert_eq!(deconvolve(&[], 2).unwrap(), t);
    }

    #[test]
    fn deconvolve_single_step() {
        let t = deconvolve(&[TapeVector::new([0, PAD])], 2).unwrap();
        assert_eq!(t, WordTuple(vec![vec![0], vec![]]));
    }

    #[test]
    fn deconvolve_rejects_symbol_after_pad() {
        let s = [TapeVector::new([0, PAD]), TapeVector::new([0, 1])];
        assert!(matches!(
            deconvolve(&s, 2),
            Err(Error::MalformedConvolution { tape: 1, position: 1 })
        ));
        // A tape that runs out first is fine.
        let ok = [TapeVector::new([0, 0]), TapeVector::new([PAD, 1])];
        assert_eq!(deconvolve(&ok, 2).unwrap(), WordTuple(vec![vec![0], vec![0, 1]]));
    }

    #[test]
    fn convolve_rejects_foreign_symbols() {
        let t = WordTuple(vec![vec![0, 7]]);
        assert!(matches!(ab().convolve(&t), Err(Error::AlphabetMismatch(_))));
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(["a", "a"]).is_err());
        assert!(Alphabet::new(["_"]).is_err());
        assert!(Alphabet::new(Vec::<String>::new()).is_err());
        let multi = Alphabet::new(["s1", "s2"]).unwrap();
        assert_eq!(multi.parse_word("s1 s2 s1").unwrap(), vec![0, 1, 0]);
        assert_eq!(multi.render_word(&[1, 0]), "s2 s1");
        assert_eq!(ab().parse_word("ε").unwrap(), Word::new());
    }
}
