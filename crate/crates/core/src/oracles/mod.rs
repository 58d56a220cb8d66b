//! Brute-force ground truth: exact group arithmetic with generating sets,
//! word lengths, balls and random-walk functionals.

mod groups;
mod length;
mod walks;

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use groups::{
    FreeGroup, Group, IntLattice, Integers, LampGroup, Lamps, WreathElem, WreathZ,
};
pub use length::{g2_length, lamp_walk_cost, lamplighter_s1_length, lamplighter_s1prime_length};
pub use walks::{
    summarize, walk_drift, walk_drift_grid, walk_range, walk_range_grid, walk_range_grid_by,
    Functional,
    WalkFunctionalEstimate,
};

/// Default radius cap for breadth-first word lengths.
pub const DEFAULT_LENGTH_CAP: u64 = 8;

/// An ordered generating set with its inverse pairing.
#[derive(Clone, Debug)]
pub struct GeneratorSet<E> {
    elems: Vec<E>,
    names: Vec<String>,
    inverse: Vec<usize>,
}

impl<E: Clone + Eq> GeneratorSet<E> {
    /// Wraps an explicit list, which must be closed under inversion.
    pub fn new<G: Group<Elem = E>>(group: &G, elems: Vec<E>, names: Vec<String>) -> Result<Self> {
        if elems.len() != names.len() || elems.is_empty() {
            return Err(Error::InvalidArgument(
                "generator list and names must be non-empty and of equal length".into(),
            ));
        }
        let inverse = elems
            .iter()
            .enumerate()
            .map(|(i, e)| {
                let inv = group.inv(e);
                elems.iter().position(|f| *f == inv).ok_or_else(|| {
                    Error::InvalidArgument(format!("inverse of generator {} is missing", names[i]))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSet {
            elems,
            names,
            inverse,
        })
    }

    /// `Q ∪ Q⁻¹` with duplicates (by element equality) removed; inverses not
    /// already present are appended after `Q` in order.
    pub fn symmetrize<G: Group<Elem = E>>(group: &G, q: Vec<(E, String)>) -> Self {
        let mut elems: Vec<E> = Vec::new();
        let mut names: Vec<String> = Vec::new();
        for (e, n) in q {
            if !group.is_identity(&e) && !elems.contains(&e) {
                elems.push(e);
                names.push(n);
            }
        }
        for i in 0..elems.len() {
            let inv = group.inv(&elems[i]);
            if !elems.contains(&inv) {
                names.push(format!("({})^-1", names[i]));
                elems.push(inv);
            }
        }
        GeneratorSet::new(group, elems, names).expect("symmetrized sets are closed under inversion")
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[E] {
        &self.elems
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of the inverse of generator `j`.
    pub fn inverse(&self, j: usize) -> usize {
        self.inverse[j]
    }

    pub fn inverse_pairing(&self) -> &[usize] {
        &self.inverse
    }
}

/// Closed-form word length `ℓ_S`.
pub type LengthFn<E> = Arc<dyn Fn(&E) -> u64 + Send + Sync>;

/// A group together with a symmetric generating set `S` and, where known, a
/// closed form for `ℓ_S`.
#[derive(Clone)]
pub struct OracleGroup<G: Group> {
    name: String,
    group: G,
    gens: GeneratorSet<G::Elem>,
    length: Option<LengthFn<G::Elem>>,
}

impl<G: Group> OracleGroup<G> {
    pub fn new(name: impl Into<String>, group: G, gens: GeneratorSet<G::Elem>) -> Self {
        OracleGroup {
            name: name.into(),
            group,
            gens,
            length: None,
        }
    }

    pub fn with_length(mut self, f: impl Fn(&G::Elem) -> u64 + Send + Sync + 'static) -> Self {
        self.length = Some(Arc::new(f));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &G {
        &self.group
    }

    pub fn gens(&self) -> &GeneratorSet<G::Elem> {
        &self.gens
    }

    pub fn identity(&self) -> G::Elem {
        self.group.identity()
    }

    pub fn has_closed_length(&self) -> bool {
        self.length.is_some()
    }

    pub fn closed_length(&self, g: &G::Elem) -> Option<u64> {
        self.length.as_ref().map(|f| f(g))
    }

    /// `g·s_j`.
    pub fn apply(&self, g: &G::Elem, j: usize) -> G::Elem {
        self.group.mul(g, &self.gens.elems[j])
    }

    /// Evaluates a word in generator indices.
    pub fn eval(&self, path: &[usize]) -> G::Elem {
        let mut g = self.group.identity();
        for &j in path {
            self.group.mul_assign(&mut g, &self.gens.elems[j]);
        }
        g
    }
}

impl<G: Group> std::fmt::Debug for OracleGroup<G> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("OracleGroup")
            .field("name", &self.name)
            .field("generators", &self.gens.names)
            .field("closed_length", &self.length.is_some())
            .finish()
    }
}

fn coordinate_names(m: usize) -> (Vec<String>, Vec<String>) {
    if m == 1 {
        (vec!["p".into()], vec!["n".into()])
    } else {
        let pos = (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
        let neg = (0..m).map(|i| ((b'A' + i as u8) as char).to_string()).collect();
        (pos, neg)
    }
}

/// ℤᵐ with `S = {±e_i}`, ordered `+e_1 … +e_m, −e_1 … −e_m`.
pub fn oracle_zm(m: usize) -> Result<OracleGroup<IntLattice>> {
    if !(1..=26).contains(&m) {
        return Err(Error::InvalidArgument(format!("ℤ^m needs 1 ≤ m ≤ 26, got {m}")));
    }
    let group = IntLattice { dim: m };
    let unit = |i: usize, s: i64| {
        let mut v = vec![0; m];
        v[i] = s;
        v
    };
    let (pos, neg) = coordinate_names(m);
    let elems = (0..m).map(|i| unit(i, 1)).chain((0..m).map(|i| unit(i, -1))).collect();
    let gens = GeneratorSet::new(&group, elems, pos.into_iter().chain(neg).collect())?;
    Ok(OracleGroup::new(format!("z{m}"), group, gens)
        .with_length(|g: &Vec<i64>| g.iter().map(|x| x.unsigned_abs()).sum()))
}

/// The free group `F_m` with `S = {s_i^{±1}}`, ordered `s_1 … s_m, s_1⁻¹ … s_m⁻¹`.
pub fn oracle_free(m: usize) -> Result<OracleGroup<FreeGroup>> {
    if !(1..=26).contains(&m) {
        return Err(Error::InvalidArgument(format!("F_m needs 1 ≤ m ≤ 26, got {m}")));
    }
    let group = FreeGroup { rank: m };
    let (pos, neg) = coordinate_names(m.max(2));
    let elems = (0..m)
        .map(|i| vec![i as i32 + 1])
        .chain((0..m).map(|i| vec![-(i as i32) - 1]))
        .collect();
    let names = pos[..m].iter().chain(&neg[..m]).cloned().collect();
    let gens = GeneratorSet::new(&group, elems, names)?;
    Ok(OracleGroup::new(format!("f{m}"), group, gens).with_length(|g: &Vec<i32>| g.len() as u64))
}

/// `ℤ₂ ≀ H` generated by the shifts of the base generating set and the lamp
/// toggle `h` at the identity.
pub fn oracle_wreath_z2_over<H: Group + Clone>(base: &OracleGroup<H>) -> OracleGroup<LampGroup<H>> {
    let group = LampGroup {
        base: base.group.clone(),
    };
    let mut elems: Vec<_> = base.gens.elems.iter().map(|b| group.shift(b.clone())).collect();
    let mut names: Vec<String> = base.gens.names.clone();
    elems.push(group.toggle());
    names.push("h".into());
    let gens = GeneratorSet::new(&group, elems, names).expect("shifts and h are closed under inversion");
    OracleGroup::new(format!("z2-wr-{}", base.name), group, gens)
}

/// The lamplighter `ℤ₂ ≀ ℤ` with `S₁′ = {t, t⁻¹, h}`.
pub fn oracle_lamplighter() -> OracleGroup<LampGroup<Integers>> {
    let group = LampGroup { base: Integers };
    let gens = GeneratorSet::new(
        &group,
        vec![group.shift(1), group.shift(-1), group.toggle()],
        vec!["t".into(), "T".into(), "h".into()],
    )
    .expect("S1' is symmetric");
    OracleGroup::new("lamplighter", group, gens).with_length(lamplighter_s1prime_length)
}

/// `S₁ = Q₁ ∪ Q₁⁻¹` with `Q₁ = {t, th, ht, hth}`, ordered
/// `t, th, ht, hth, t⁻¹, ht⁻¹, t⁻¹h, ht⁻¹h` so that generator `j` and
/// `j + 4` are mutually inverse.
pub fn lamplighter_s1_generators(
    group: &LampGroup<Integers>,
) -> GeneratorSet<Lamps<i64>> {
    let (t, tt, h) = (group.shift(1), group.shift(-1), group.toggle());
    let prod = |xs: &[&Lamps<i64>]| {
        let mut g = group.identity();
        for x in xs {
            group.mul_assign(&mut g, x);
        }
        g
    };
    let elems = vec![
        prod(&[&t]),
        prod(&[&t, &h]),
        prod(&[&h, &t]),
        prod(&[&h, &t, &h]),
        prod(&[&tt]),
        prod(&[&h, &tt]),
        prod(&[&tt, &h]),
        prod(&[&h, &tt, &h]),
    ];
    let names = ["t", "th", "ht", "hth", "T", "hT", "Th", "hTh"]
        .map(String::from)
        .to_vec();
    GeneratorSet::new(group, elems, names).expect("S1 is symmetric")
}

/// The lamplighter `ℤ₂ ≀ ℤ` with `S₁`.
pub fn oracle_lamplighter_s1() -> OracleGroup<LampGroup<Integers>> {
    let group = LampGroup { base: Integers };
    let gens = lamplighter_s1_generators(&group);
    OracleGroup::new("lamplighter-s1", group, gens).with_length(lamplighter_s1_length)
}

/// The set `Q = {h_i^p t h_j^q}` of `G ≀ ℤ`, built from base generators
/// `g_1 … g_m` (indices into the base generating set) and symmetrized.
/// Index combinations giving equal elements are listed once.
pub fn wreath_over_z_generators<G: Group + Clone>(
    group: &WreathZ<G>,
    base: &OracleGroup<G>,
    base_q: &[usize],
) -> GeneratorSet<WreathElem<G::Elem>> {
    let bg = &base.group;
    let power = |i: usize, p: i64| bg.pow(&base.gens.elems[i], p);
    let label = |i: usize, p: i64| match p {
        0 => String::new(),
        1 => base.gens.names[i].clone(),
        _ => format!("{}^-1", base.gens.names[i]),
    };
    let mut q = Vec::with_capacity(9 * base_q.len() * base_q.len());
    for &i in base_q {
        for &j in base_q {
            for p in [-1, 0, 1] {
                for r in [-1, 0, 1] {
                    let mut g = group.at_origin(power(i, p));
                    group.mul_assign(&mut g, &group.step());
                    group.mul_assign(&mut g, &group.at_origin(power(j, r)));
                    let name = format!("[{}]t[{}]", label(i, p), label(j, r));
                    q.push((g, name));
                }
            }
        }
    }
    GeneratorSet::symmetrize(group, q)
}

/// `G₂ = (ℤ₂ ≀ ℤ) ≀ ℤ` with the symmetrized `Q` built from `Q₁`.
pub fn oracle_g2() -> OracleGroup<WreathZ<LampGroup<Integers>>> {
    let base = oracle_lamplighter_s1();
    let group = WreathZ {
        base: base.group.clone(),
    };
    let gens = wreath_over_z_generators(&group, &base, &[0, 1, 2, 3]);
    OracleGroup::new("g2", group, gens).with_length(g2_length)
}

/// Dispatch target for code that is generic over the oracle group.
pub trait OracleVisitor {
    type Output;
    fn visit<G: Group + 'static>(self, oracle: OracleGroup<G>) -> Self::Output;
}

/// Names accepted by [`visit_oracle`].
pub const ORACLE_NAMES: &[&str] = &[
    "z1",
    "z2",
    "z3",
    "f2",
    "f3",
    "lamplighter",
    "lamplighter-s1",
    "lamplighter-z2",
    "g2",
];

/// Builds the named oracle and hands it to `v`.
pub fn visit_oracle<V: OracleVisitor>(name: &str, v: V) -> Result<V::Output> {
    Ok(match name {
        "z1" | "z" => v.visit(oracle_zm(1)?),
        "z2" => v.visit(oracle_zm(2)?),
        "z3" => v.visit(oracle_zm(3)?),
        "f2" => v.visit(oracle_free(2)?),
        "f3" => v.visit(oracle_free(3)?),
        "lamplighter" => v.visit(oracle_lamplighter()),
        "lamplighter-s1" => v.visit(oracle_lamplighter_s1()),
        "lamplighter-z2" => v.visit(oracle_wreath_z2_over(&oracle_zm(2)?)),
        "g2" => v.visit(oracle_g2()),
        other => {
            return Err(Error::InvalidArgument(format!(
                "unknown group {other:?} (known: {})",
                ORACLE_NAMES.join(", ")
            )))
        }
    })
}

/// Independent random stream `stream` derived from `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s1_has_eight_paired_elements() {
        let o = oracle_lamplighter_s1();
        let g = o.gens();
        assert_eq!(g.len(), 8);
        for j in 0..8 {
            assert_eq!(g.inverse(j), (j + 4) % 8);
        }
        // (th)^-1 = h t^-1
        assert_eq!(o.group().inv(&g.elems()[1]), g.elems()[5]);
        let hth = &g.elems()[3];
        let sq = o.group().mul(hth, hth);
        assert_eq!(sq.pos, 2);
    }

    #[test]
    fn prop3_generator_count() {
        let o = oracle_g2();
        // 144 index combinations collapse to 81 distinct elements of Q.
        assert_eq!(o.gens().len(), 162);
        let plain_t = o.group().step();
        assert!(o.gens().elems().contains(&plain_t));
        for j in 0..o.gens().len() {
            let i = o.gens().inverse(j);
            assert_eq!(
                o.group().mul(&o.gens().elems()[j], &o.gens().elems()[i]),
                o.identity()
            );
        }
    }

    #[test]
    fn zm_generators_pair_up() {
        let o = oracle_zm(3).unwrap();
        assert_eq!(o.gens().inverse_pairing(), &[3, 4, 5, 0, 1, 2]);
        assert!(oracle_zm(0).is_err());
        let f = oracle_free(2).unwrap();
        assert_eq!(f.gens().names(), &["a", "b", "A", "B"]);
    }

    #[test]
    fn unknown_group_is_rejected() {
        struct Name;
        impl OracleVisitor for Name {
            type Output = String;
            fn visit<G: Group + 'static>(self, o: OracleGroup<G>) -> String {
                o.name().to_string()
            }
        }
        assert_eq!(visit_oracle("f3", Name).unwrap(), "f3");
        assert!(visit_oracle("h5", Name).is_err());
    }
}
