//! Word lengths: breadth-first search, balls, and closed forms for the
//! lamplighter generating sets and for `G₂`.

use std::collections::{HashMap, HashSet};

use super::{Group, Lamps, OracleGroup, WreathElem};
use crate::error::{Error, Result};

impl<G: Group> OracleGroup<G> {
    /// `ℓ_S(g)`: the closed form when one is attached, otherwise a
    /// bidirectional breadth-first search bounded by `cap`.
    pub fn word_length(&self, g: &G::Elem, cap: u64) -> Result<u64> {
        match self.closed_length(g) {
            Some(l) => Ok(l),
            None => self.bfs_word_length(g, cap),
        }
    }

    /// Distance from the identity to `g` in the Cayley graph, searching from
    /// both ends. Fails when `ℓ_S(g) > cap`.
    pub fn bfs_word_length(&self, g: &G::Elem, cap: u64) -> Result<u64> {
        let id = self.identity();
        if *g == id {
            return Ok(0);
        }
        let gens = self.gens().elems();
        let mut seen = [HashMap::from([(id.clone(), 0u64)]), HashMap::from([(g.clone(), 0u64)])];
        let mut frontier = [vec![id], vec![g.clone()]];
        let mut radius = [0u64, 0u64];
        while radius[0] + radius[1] < cap {
            let side = usize::from(frontier[1].len() < frontier[0].len());
            if frontier[side].is_empty() {
                break;
            }
            let mut next = Vec::new();
            let mut best: Option<u64> = None;
            for x in std::mem::take(&mut frontier[side]) {
                for s in gens {
                    let y = self.group().mul(&x, s);
                    if seen[side].contains_key(&y) {
                        continue;
                    }
                    if let Some(d) = seen[1 - side].get(&y) {
                        let total = radius[side] + 1 + d;
                        best = Some(best.map_or(total, |b| b.min(total)));
                    }
                    seen[side].insert(y.clone(), radius[side] + 1);
                    next.push(y);
                }
            }
            radius[side] += 1;
            if let Some(b) = best {
                return Ok(b);
            }
            frontier[side] = next;
        }
        Err(Error::UnknownLength(cap as usize))
    }

    /// Spheres of radius `0..=r`, each in breadth-first discovery order.
    pub fn ball_layers(&self, r: usize) -> Vec<Vec<G::Elem>> {
        let id = self.identity();
        let mut seen: HashSet<G::Elem> = HashSet::from([id.clone()]);
        let mut layers = vec![vec![id]];
        for _ in 0..r {
            let mut next = Vec::new();
            for x in layers.last().expect("non-empty") {
                for s in self.gens().elems() {
                    let y = self.group().mul(x, s);
                    if seen.insert(y.clone()) {
                        next.push(y);
                    }
                }
            }
            layers.push(next);
        }
        layers
    }

    /// The ball `B_r`, ordered by length then discovery.
    pub fn ball(&self, r: usize) -> Vec<G::Elem> {
        self.ball_layers(r).into_iter().flatten().collect()
    }

    pub fn sphere_sizes(&self, r: usize) -> Vec<usize> {
        self.ball_layers(r).iter().map(Vec::len).collect()
    }
}

/// Cheapest walk on ℤ from 0 to `z` visiting every cell of `[lo, hi]`
/// (which must contain both).
pub fn lamp_walk_cost(lo: i64, hi: i64, z: i64) -> u64 {
    let left_first = -lo + (hi - lo) + (hi - z);
    let right_first = hi + (hi - lo) + (z - lo);
    left_first.min(right_first) as u64
}

fn hull(g: &Lamps<i64>) -> (i64, i64) {
    let lo = g.lit.first().copied().unwrap_or(0).min(0).min(g.pos);
    let hi = g.lit.last().copied().unwrap_or(0).max(0).max(g.pos);
    (lo, hi)
}

/// `ℓ` in `ℤ₂ ≀ ℤ` for `S₁′ = {t, t⁻¹, h}`: one toggle per lit lamp plus the
/// cheapest covering walk.
pub fn lamplighter_s1prime_length(g: &Lamps<i64>) -> u64 {
    let (lo, hi) = hull(g);
    g.lit.len() as u64 + lamp_walk_cost(lo, hi, g.pos)
}

/// `ℓ` in `ℤ₂ ≀ ℤ` for `S₁ = {t, th, ht, hth}^{±1}`: every step may toggle
/// the cells it leaves and enters, so only the walk is paid for. A lone lit
/// lamp at the origin with the lighter back home needs a step out and back.
pub fn lamplighter_s1_length(g: &Lamps<i64>) -> u64 {
    let (lo, hi) = hull(g);
    let walk = lamp_walk_cost(lo, hi, g.pos);
    if walk == 0 && !g.lit.is_empty() {
        2
    } else {
        walk
    }
}

/// `ℓ` in `G₂ = (ℤ₂ ≀ ℤ) ≀ ℤ` for the symmetrized `Q = {h_i^p t h_j^q}` built
/// from `Q₁`.
///
/// A word of length `N` is a walk of `N` unit steps on ℤ; a step across the
/// edge `{c, c+1}` multiplies the values at `c` and at `c+1` by one element
/// of the `S₁`-ball of radius 1 each. With `e(c)` traversals of edge `c`,
/// cell `c` receives `e(c−1) + e(c)` such factors and so needs
/// `e(c−1) + e(c) ≥ ℓ_{S₁}(F(c))`. A traversal vector is realizable by a walk
/// from 0 to `z` iff its support is a contiguous run of edges touching 0 and
/// its parity is odd exactly between 0 and `z`. The minimum of `Σ e(c)` is
/// found by dynamic programming over edges from left to right.
pub fn g2_length(g: &WreathElem<Lamps<i64>>) -> u64 {
    let z = g.pos;
    let need: HashMap<i64, u64> = g
        .values
        .iter()
        .map(|(&c, v)| (c, lamplighter_s1_length(v)))
        .collect();
    if need.is_empty() && z == 0 {
        return 0;
    }
    let first = g.values.keys().next().copied().unwrap_or(0);
    let last = g.values.keys().next_back().copied().unwrap_or(0);
    let lo = first.min(0).min(z);
    let hi = last.max(0).max(z);
    let req = |c: i64| -> u64 {
        let r = need.get(&c).copied().unwrap_or(0);
        // The walk is non-empty, so it must use an edge at the origin.
        if c == 0 {
            r.max(1)
        } else {
            r
        }
    };
    let cap = need.values().copied().max().unwrap_or(0).max(1) as usize + 2;
    let (a, b) = (z.min(0), z.max(0));
    const INF: u64 = u64::MAX / 4;

    // before: no edge used yet; after: the run of used edges has ended;
    // active[e]: previous edge traversed e ≥ 1 times.
    let mut before = 0u64;
    let mut after = INF;
    let mut active = vec![INF; cap + 1];
    for c in lo - 1..=hi {
        let r = req(c);
        let odd = a <= c && c < b;
        // suffix[e] = min over e' ≥ e of active[e'].
        let mut suffix = vec![INF; cap + 2];
        for e in (1..=cap).rev() {
            suffix[e] = suffix[e + 1].min(active[e]);
        }
        let mut next_active = vec![INF; cap + 1];
        for (e, slot) in next_active.iter_mut().enumerate().skip(1) {
            if (e % 2 == 1) != odd {
                continue;
            }
            let mut best = if e as u64 >= r { before } else { INF };
            let from = (r.saturating_sub(e as u64) as usize).max(1);
            if from <= cap {
                best = best.min(suffix[from]);
            }
            if best < INF {
                *slot = best + e as u64;
            }
        }
        let (next_before, next_after) = if odd {
            (INF, INF)
        } else {
            let nb = if r == 0 { before } else { INF };
            let from = (r as usize).max(1);
            let close = if from <= cap { suffix[from] } else { INF };
            let na = close.min(if r == 0 { after } else { INF });
            (nb, na)
        };
        before = next_before;
        after = next_after;
        active = next_active;
    }
    let best = active.iter().copied().min().unwrap_or(INF).min(after);
    debug_assert!(best < INF, "some walk always exists");
    best
}
