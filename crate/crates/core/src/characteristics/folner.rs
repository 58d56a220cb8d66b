use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::growth::ball_layers;
use crate::automata::Word;
use crate::error::{Error, Result};
use crate::presentations::word_of;
use crate::transducer::ClassTTransducer;

/// Subsets examined by [`folner_exact`] before it gives up.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerReport {
    pub set: Vec<Word>,
    pub boundary: Vec<Word>,
    pub ratio: BigRational,
    pub epsilon: BigRational,
    /// Radius of the ball searched exhaustively, for exact results.
    pub exact_over_radius: Option<usize>,
}

/// Words of `w` with at least one output outside `w`, in the order given.
pub fn boundary(t: &ClassTTransducer, w: &[Word]) -> Result<Vec<Word>> {
    let set: HashSet<&Word> = w.iter().collect();
    let mut out = Vec::new();
    for x in w {
        if t.outputs(x)?.iter().any(|y| !set.contains(y)) {
            out.push(x.clone());
        }
    }
    Ok(out)
}

fn ratio(num: usize, den: usize) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn folner_ratio(t: &ClassTTransducer, w: &[Word]) -> Result<BigRational> {
    let distinct: HashSet<&Word> = w.iter().collect();
    if distinct.is_empty() {
        return Err(Error::InvalidArgument("Følner ratio of the empty set".into()));
    }
    let b = boundary(t, w)?;
    let b: HashSet<&Word> = b.iter().collect();
    Ok(ratio(b.len(), distinct.len()))
}

/// First member of `family` whose boundary fraction is below `epsilon`.
pub fn folner_upper(
    t: &ClassTTransducer,
    family: impl IntoIterator<Item = Vec<Word>>,
    epsilon: &BigRational,
) -> Result<FolnerReport> {
    let mut tried = 0;
    for set in family {
        tried += 1;
        let r = folner_ratio(t, &set)?;
        if &r < epsilon {
            let boundary = boundary(t, &set)?;
            return Ok(FolnerReport {
                set,
                boundary,
                ratio: r,
                epsilon: epsilon.clone(),
                exact_over_radius: None,
            });
        }
    }
    Err(Error::NotFound(format!(
        "no set with boundary fraction below {epsilon} among {tried} candidates"
    )))
}

/// Balls `V_0, …, V_r` around the base word.
pub fn ball_family(t: &ClassTTransducer, max_radius: usize) -> Result<Vec<Vec<Word>>> {
    ball_layers(t, t.base_word(), max_radius)
}

/// Images of the base word under the given label paths.
pub fn words_from_paths(t: &ClassTTransducer, paths: &[Vec<usize>]) -> Result<Vec<Word>> {
    paths.iter().map(|p| word_of(t.presentation(), p)).collect()
}

/// Intervals `{w₀, s·w₀, …, s^{L−1}·w₀}` for `L = 1 … max_len`, stepping
/// with label `step`.
pub fn interval_family(t: &ClassTTransducer, step: usize, max_len: usize) -> Result<Vec<Vec<Word>>> {
    let mut cur = t.base_word().to_vec();
    let mut set = Vec::new();
    let mut out = Vec::new();
    for _ in 0..max_len {
        set.push(cur.clone());
        out.push(set.clone());
        cur = t.outputs(&cur)?[step].clone();
    }
    Ok(out)
}

/// Lamplighter rectangles: lamps inside `[0, a)`, lighter in `[0, a)`, for
/// `a = 1 … max_width`. Needs labels named `t`, `T` and `h`.
pub fn lamplighter_rectangle_family(t: &ClassTTransducer, max_width: usize) -> Result<Vec<Vec<Word>>> {
    let p = t.presentation();
    let label = |n: &str| {
        p.label_index(n)
            .ok_or_else(|| Error::InvalidArgument(format!("presentation has no label '{n}'")))
    };
    let (right, left, toggle) = (label("t")?, label("T")?, label("h")?);
    if max_width > 20 {
        return Err(Error::InvalidArgument("rectangle width above 20".into()));
    }
    let mut out = Vec::new();
    for a in 1..=max_width {
        let mut paths = Vec::with_capacity(a << a);
        for lamps in 0u32..(1 << a) {
            let mut sweep = Vec::new();
            for c in 0..a {
                if lamps & (1 << c) != 0 {
                    sweep.push(toggle);
                }
                if c + 1 < a {
                    sweep.push(right);
                }
            }
            for z in 0..a {
                let mut path = sweep.clone();
                path.extend(std::iter::repeat_n(left, a - 1 - z));
                paths.push(path);
            }
        }
        out.push(words_from_paths(t, &paths)?);
    }
    Ok(out)
}

/// Smallest set inside the ball of radius `radius_budget` with boundary
/// fraction below `epsilon`, searching sets of at most `size_budget` words.
///
/// Only weakly connected sets are enumerated: the boundary of a disjoint
/// union of non-adjacent parts is the union of their boundaries, so some
/// part of a passing set passes on its own.
pub fn folner_exact(
    t: &ClassTTransducer,
    epsilon: &BigRational,
    size_budget: usize,
    radius_budget: usize,
    node_budget: u64,
) -> Result<FolnerReport> {
    let universe = ball_layers(t, t.base_word(), radius_budget)?
        .pop()
        .unwrap_or_default();
    let index: HashMap<&Word, usize> = universe.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let n = universe.len();
    let mut out_nbrs: Vec<Vec<Option<usize>>> = Vec::with_capacity(n);
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, w) in universe.iter().enumerate() {
        let outs: Vec<Option<usize>> = t.outputs(w)?.iter().map(|y| index.get(y).copied()).collect();
        for &j in outs.iter().flatten() {
            if j != i {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        out_nbrs.push(outs);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }

    let mut search = Esu {
        adj: &adj,
        out_nbrs: &out_nbrs,
        epsilon,
        in_sub: vec![false; n],
        near: vec![0; n],
        sub: Vec::new(),
        nodes: 0,
        node_budget,
    };
    for size in 1..=size_budget.min(n) {
        for root in 0..n {
            if let Some(found) = search.rooted_at(root, size)? {
                let set: Vec<Word> = found.iter().map(|&i| universe[i].clone()).collect();
                let boundary = boundary(t, &set)?;
                let ratio = ratio(boundary.len(), set.len());
                return Ok(FolnerReport {
                    set,
                    boundary,
                    ratio,
                    epsilon: epsilon.clone(),
                    exact_over_radius: Some(radius_budget),
                });
            }
        }
    }
    Err(Error::NotFound(format!(
        "no set of at most {size_budget} words within radius {radius_budget} has boundary fraction below {epsilon}"
    )))
}

/// Enumeration of connected vertex sets, each exactly once, by extending
/// from the smallest vertex.
struct Esu<'a> {
    adj: &'a [Vec<usize>],
    out_nbrs: &'a [Vec<Option<usize>>],
    epsilon: &'a BigRational,
    in_sub: Vec<bool>,
    /// Number of current members equal or adjacent to each vertex.
    near: Vec<u32>,
    sub: Vec<usize>,
    nodes: u64,
    node_budget: u64,
}

impl Esu<'_> {
    fn push(&mut self, v: usize) {
        self.in_sub[v] = true;
        self.sub.push(v);
        self.near[v] += 1;
        for &u in &self.adj[v] {
            self.near[u] += 1;
        }
    }

    fn pop(&mut self) {
        let v = self.sub.pop().expect("non-empty");
        self.in_sub[v] = false;
        self.near[v] -= 1;
        for &u in &self.adj[v] {
            self.near[u] -= 1;
        }
    }

    fn passes(&self) -> bool {
        let b = self
            .sub
            .iter()
            .filter(|&&v| {
                self.out_nbrs[v]
                    .iter()
                    .any(|o| o.is_none_or(|u| !self.in_sub[u]))
            })
            .count();
        &ratio(b, self.sub.len()) < self.epsilon
    }

    fn rooted_at(&mut self, root: usize, size: usize) -> Result<Option<Vec<usize>>> {
        let ext: Vec<usize> = self.adj[root].iter().copied().filter(|&u| u > root).collect();
        self.push(root);
        let r = self.extend(root, ext, size);
        self.pop();
        r
    }

    fn extend(&mut self, root: usize, mut ext: Vec<usize>, size: usize) -> Result<Option<Vec<usize>>> {
        self.nodes += 1;
        if self.nodes > self.node_budget {
            return Err(Error::BudgetExceeded(format!(
                "examined {} candidate sets",
                self.node_budget
            )));
        }
        if self.sub.len() == size {
            return Ok(self.passes().then(|| self.sub.clone()));
        }
        while let Some(w) = ext.pop() {
            let mut next = ext.clone();
            for &u in &self.adj[w] {
                if u > root && self.near[u] == 0 && !next.contains(&u) {
                    next.push(u);
                }
            }
            self.push(w);
            let r = self.extend(root, next, size)?;
            self.pop();
            if r.is_some() {
                return Ok(r);
            }
        }
        Ok(None)
    }
}
