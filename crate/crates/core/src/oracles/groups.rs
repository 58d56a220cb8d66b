//! Exact group arithmetic: ℤᵐ, free groups, lamplighters `ℤ₂ ≀ H` and
//! wreath products `G ≀ ℤ`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::hash::Hash;

/// A group with computable multiplication and inversion.
pub trait Group: Send + Sync {
    type Elem: Clone + Eq + Hash + Ord + Debug + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    /// `a ← a·b`; override when an in-place update is cheaper.
    fn mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        *a = self.mul(a, b);
    }

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `a^p` for `p ∈ ℤ`.
    fn pow(&self, a: &Self::Elem, p: i64) -> Self::Elem {
        let base = if p < 0 { self.inv(a) } else { a.clone() };
        let mut out = self.identity();
        for _ in 0..p.unsigned_abs() {
            self.mul_assign(&mut out, &base);
        }
        out
    }
}

/// The integers under addition.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Group for Integers {
    type Elem = i64;

    fn identity(&self) -> i64 {
        0
    }

    fn mul(&self, a: &i64, b: &i64) -> i64 {
        a + b
    }

    fn inv(&self, a: &i64) -> i64 {
        -a
    }

    fn mul_assign(&self, a: &mut i64, b: &i64) {
        *a += b;
    }
}

/// ℤᵐ under addition.
#[derive(Clone, Copy, Debug)]
pub struct IntLattice {
    pub dim: usize,
}

impl Group for IntLattice {
    type Elem = Vec<i64>;

    fn identity(&self) -> Vec<i64> {
        vec![0; self.dim]
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn mul_assign(&self, a: &mut Vec<i64>, b: &Vec<i64>) {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
    }
}

/// Free group of the given rank. Elements are reduced words; letter `i + 1`
/// is the i-th generator and `-(i + 1)` its inverse.
#[derive(Clone, Copy, Debug)]
pub struct FreeGroup {
    pub rank: usize,
}

impl FreeGroup {
    pub fn generator(&self, i: usize) -> Vec<i32> {
        vec![i as i32 + 1]
    }
}

impl Group for FreeGroup {
    type Elem = Vec<i32>;

    fn identity(&self) -> Vec<i32> {
        Vec::new()
    }

    fn mul(&self, a: &Vec<i32>, b: &Vec<i32>) -> Vec<i32> {
        let mut out = a.clone();
        self.mul_assign(&mut out, b);
        out
    }

    fn inv(&self, a: &Vec<i32>) -> Vec<i32> {
        a.iter().rev().map(|x| -x).collect()
    }

    fn mul_assign(&self, a: &mut Vec<i32>, b: &Vec<i32>) {
        for &x in b {
            if a.last() == Some(&-x) {
                a.pop();
            } else {
                a.push(x);
            }
        }
    }
}

/// Element of `ℤ₂ ≀ H`: the set of lit lamps and the lamplighter position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lamps<E: Ord> {
    pub lit: BTreeSet<E>,
    pub pos: E,
}

/// The lamplighter group `ℤ₂ ≀ H` with
/// `(S, b)·(S′, b′) = (S Δ b·S′, b·b′)`.
#[derive(Clone, Debug)]
pub struct LampGroup<H> {
    pub base: H,
}

impl<H: Group> LampGroup<H> {
    /// The element moving the lamplighter by `b`.
    pub fn shift(&self, b: H::Elem) -> Lamps<H::Elem> {
        Lamps {
            lit: BTreeSet::new(),
            pos: b,
        }
    }

    /// The element toggling the lamp at the identity of `H`.
    pub fn toggle(&self) -> Lamps<H::Elem> {
        Lamps {
            lit: BTreeSet::from([self.base.identity()]),
            pos: self.base.identity(),
        }
    }
}

impl<H: Group> Group for LampGroup<H> {
    type Elem = Lamps<H::Elem>;

    fn identity(&self) -> Self::Elem {
        self.shift(self.base.identity())
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.clone();
        self.mul_assign(&mut out, b);
        out
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        let pos = self.base.inv(&a.pos);
        Lamps {
            lit: a.lit.iter().map(|s| self.base.mul(&pos, s)).collect(),
            pos,
        }
    }

    fn mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        for s in &b.lit {
            let cell = self.base.mul(&a.pos, s);
            if !a.lit.remove(&cell) {
                a.lit.insert(cell);
            }
        }
        self.base.mul_assign(&mut a.pos, &b.pos);
    }
}

/// Element of `G ≀ ℤ`: a finitely supported map `ℤ → G` (no identity values
/// stored) and a position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WreathElem<E: Ord> {
    pub values: BTreeMap<i64, E>,
    pub pos: i64,
}

/// The wreath product `G ≀ ℤ` with `(F, b)·(F′, b′) = (x ↦ F(x)·F′(x − b), b + b′)`.
#[derive(Clone, Debug)]
pub struct WreathZ<G> {
    pub base: G,
}

impl<G: Group> WreathZ<G> {
    /// The element `t` moving the position by one.
    pub fn step(&self) -> WreathElem<G::Elem> {
        WreathElem {
            values: BTreeMap::new(),
            pos: 1,
        }
    }

    /// The element placing `g` at the origin.
    pub fn at_origin(&self, g: G::Elem) -> WreathElem<G::Elem> {
        let mut values = BTreeMap::new();
        if !self.base.is_identity(&g) {
            values.insert(0, g);
        }
        WreathElem { values, pos: 0 }
    }
}

impl<G: Group> Group for WreathZ<G> {
    type Elem = WreathElem<G::Elem>;

    fn identity(&self) -> Self::Elem {
        WreathElem {
            values: BTreeMap::new(),
            pos: 0,
        }
    }

    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.clone();
        self.mul_assign(&mut out, b);
        out
    }

    fn inv(&self, a: &Self::Elem) -> Self::Elem {
        WreathElem {
            values: a
                .values
                .iter()
                .map(|(x, v)| (x - a.pos, self.base.inv(v)))
                .collect(),
            pos: -a.pos,
        }
    }

    fn mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem) {
        for (x, v) in &b.values {
            let cell = x + a.pos;
            match a.values.get_mut(&cell) {
                Some(cur) => {
                    self.base.mul_assign(cur, v);
                    if self.base.is_identity(cur) {
                        a.values.remove(&cell);
                    }
                }
                None => {
                    a.values.insert(cell, v.clone());
                }
            }
        }
        a.pos += b.pos;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lamplighter_rules() {
        let g = LampGroup { base: Integers };
        let (t, h) = (g.shift(1), g.toggle());
        let mut x = g.identity();
        for s in [&h, &t, &h] {
            g.mul_assign(&mut x, s);
        }
        assert_eq!(x.lit, BTreeSet::from([0, 1]));
        assert_eq!(x.pos, 1);
        assert_eq!(g.mul(&h, &h), g.identity());
        assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
    }

    #[test]
    fn free_group_reduces() {
        let f = FreeGroup { rank: 2 };
        let a = f.generator(0);
        assert_eq!(f.mul(&a, &f.inv(&a)), f.identity());
        assert_eq!(f.mul(&vec![1, 2], &vec![-2, 1]), vec![1, 1]);
    }

    #[test]
    fn wreath_inverse_and_identity_values() {
        let base = LampGroup { base: Integers };
        let w = WreathZ { base: base.clone() };
        let hx = w.at_origin(base.toggle());
        let t = w.step();
        let x = w.mul(&w.mul(&hx, &t), &hx);
        assert_eq!(x.values.len(), 2);
        assert_eq!(w.mul(&x, &w.inv(&x)), w.identity());
        assert_eq!(w.mul(&hx, &hx), w.identity());
        assert!(w.mul(&hx, &hx).values.is_empty());
    }
}
