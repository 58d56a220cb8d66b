//! The `(1, k)`-transducer of a presentation: one input word, the `k`
//! neighbours of its vertex as output.

use std::sync::Arc;

use dashmap::DashMap;

use crate::automata::{
    explore, length_difference_bound, minimize, unique_image, StateId, Symbol, SyncAutomaton,
    TapeVector, Word, PAD,
};
use crate::error::{Error, Result};
use crate::presentations::{validate, GraphPresentation};

/// Memoized translations kept before the cache stops growing.
pub const DEFAULT_CACHE_LIMIT: usize = 4_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Translation {
    Accepted(Vec<Word>),
    Rejected,
}

#[derive(Debug)]
pub struct ClassTTransducer {
    presentation: GraphPresentation,
    overrun: usize,
    cache: DashMap<Word, Arc<[Word]>>,
    cache_limit: usize,
}

impl ClassTTransducer {
    /// Validates the presentation first; any failed check is an error.
    pub fn from_presentation(p: GraphPresentation) -> Result<Self> {
        let report = validate(&p)?;
        if !report.is_ok() {
            return Err(Error::InvalidPresentation(report.to_string()));
        }
        Self::from_validated(p)
    }

    /// Skips validation; the caller vouches for the presentation.
    pub fn from_validated(p: GraphPresentation) -> Result<Self> {
        let overrun = p
            .edges()
            .iter()
            .map(length_difference_bound)
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .max()
            .unwrap_or(0);
        Ok(ClassTTransducer {
            presentation: p,
            overrun,
            cache: DashMap::new(),
            cache_limit: DEFAULT_CACHE_LIMIT,
        })
    }

    pub fn with_cache_limit(mut self, limit: usize) -> Self {
        self.cache_limit = limit;
        self
    }

    pub fn presentation(&self) -> &GraphPresentation {
        &self.presentation
    }

    pub fn base_word(&self) -> &[Symbol] {
        self.presentation.base_word()
    }

    pub fn num_labels(&self) -> usize {
        self.presentation.num_labels()
    }

    /// Bound on how far an output may extend past the end of its input.
    pub fn overrun(&self) -> usize {
        self.overrun
    }

    pub fn translate(&self, x: &[Symbol]) -> Translation {
        match self.outputs(x) {
            Ok(out) => Translation::Accepted(out.to_vec()),
            Err(_) => Translation::Rejected,
        }
    }

    /// The `k` neighbours of `x`, shared with the memo.
    pub fn outputs(&self, x: &[Symbol]) -> Result<Arc<[Word]>> {
        if let Some(v) = self.cache.get(x) {
            return Ok(v.clone());
        }
        if !self.presentation.contains(x) {
            return Err(Error::NotInDomain(self.presentation.alphabet().render_word(x)));
        }
        let out: Arc<[Word]> = self
            .presentation
            .edges()
            .iter()
            .map(|e| unique_image(e, x))
            .collect::<Result<Vec<_>>>()?
            .into();
        if self.cache.len() < self.cache_limit {
            self.cache.insert(x.to_vec(), out.clone());
        }
        Ok(out)
    }

    pub fn clear_cache(&self) {
        self.cache.clear();
    }

    /// The `(k + 1)`-tape automaton accepting `x ⊗ E_1(x) ⊗ … ⊗ E_k(x)` for
    /// every domain word `x`. Built as the synchronized product of the edge
    /// relations on their shared input tape.
    pub fn joint_automaton(&self) -> Result<SyncAutomaton> {
        #[derive(Clone, Copy, PartialEq, Eq, Hash)]
        enum Comp {
            Run(StateId),
            Done,
        }
        let edges = self.presentation.edges();
        let alphabet = self.presentation.alphabet();
        let k = edges.len();
        let inputs: Vec<Symbol> = alphabet.padded_symbols().collect();
        let mut starts: Vec<Vec<Comp>> = vec![Vec::new()];
        for e in edges {
            starts = starts
                .into_iter()
                .flat_map(|p| {
                    e.initial_states().iter().map(move |&q| {
                        let mut p = p.clone();
                        p.push(Comp::Run(q));
                        p
                    })
                })
                .collect();
        }
        let joint = explore(
            k + 1,
            alphabet,
            starts,
            |st: &Vec<Comp>| {
                st.iter().zip(edges).all(|(c, e)| match *c {
                    Comp::Run(q) => e.is_accepting(q),
                    Comp::Done => true,
                })
            },
            |st| {
                let mut out = Vec::new();
                for &x in &inputs {
                    // Per component: (output symbol, next state) options.
                    let mut partial: Vec<(Vec<Symbol>, Vec<Comp>)> = vec![(vec![x], Vec::new())];
                    for (c, e) in st.iter().zip(edges) {
                        let mut opts: Vec<(Symbol, Comp)> = Vec::new();
                        match *c {
                            Comp::Run(q) => {
                                for (l, dst) in e.transitions(q) {
                                    if l.get(0) == x {
                                        opts.push((l.get(1), Comp::Run(*dst)));
                                    }
                                }
                                if x == PAD && e.is_accepting(q) {
                                    opts.push((PAD, Comp::Done));
                                }
                            }
                            Comp::Done => {
                                if x == PAD {
                                    opts.push((PAD, Comp::Done));
                                }
                            }
                        }
                        if opts.is_empty() {
                            partial.clear();
                            break;
                        }
                        partial = partial
                            .into_iter()
                            .flat_map(|(l, s)| {
                                opts.iter().map(move |&(y, c)| {
                                    let mut l = l.clone();
                                    let mut s = s.clone();
                                    l.push(y);
                                    s.push(c);
                                    (l, s)
                                })
                            })
                            .collect();
                    }
                    out.extend(
                        partial
                            .into_iter()
                            .map(|(l, s)| (TapeVector::new(l), s))
                            .filter(|(l, _)| !l.is_all_pad()),
                    );
                }
                out
            },
        )?;
        Ok(minimize(&joint))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{equivalent, project, WordTuple};
    use crate::presentations::preset;

    #[test]
    fn integers_translate() {
        let t = ClassTTransducer::from_presentation(preset("z1").unwrap()).unwrap();
        let a = t.presentation().alphabet().clone();
        let w = |s: &str| a.parse_word(s).unwrap();
        assert_eq!(t.translate(&w("pp")), Translation::Accepted(vec![w("ppp"), w("p")]));
        assert_eq!(t.translate(&w("")), Translation::Accepted(vec![w("p"), w("n")]));
        assert_eq!(t.translate(&w("pn")), Translation::Rejected);
        assert_eq!(t.overrun(), 1);
    }

    #[test]
    fn joint_automaton_agrees_with_translation() {
        let t = ClassTTransducer::from_presentation(preset("z2").unwrap()).unwrap();
        let j = t.joint_automaton().unwrap();
        assert_eq!(j.tapes(), 5);
        assert_eq!(equivalent(&project(&j, &[0]).unwrap(), t.presentation().domain()).unwrap(), None);
        let a = t.presentation().alphabet().clone();
        for s in ["", "aB", "bb", "AAB"] {
            let x = a.parse_word(s).unwrap();
            let Translation::Accepted(ys) = t.translate(&x) else {
                panic!("{s} rejected")
            };
            let mut tuple = vec![x.clone()];
            tuple.extend(ys.iter().cloned());
            assert!(j.accepts(&WordTuple::new(tuple.clone())).unwrap());
            tuple[1].push(0);
            assert!(!j.accepts(&WordTuple::new(tuple)).unwrap());
        }
    }
}
