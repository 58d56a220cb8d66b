//! Automatic presentations of Cayley graphs: a regular domain of normal
//! forms and one functional edge relation per generator label.

mod free;
mod lamplighter;
mod zm;

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::hash::Hash;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use free::{free_alphabet, free_decode, free_encode, free_group_presentation};
pub use lamplighter::{
    lamplighter_alphabet, lamplighter_decode, lamplighter_encode, lamplighter_presentation,
    lamplighter_s1_presentation, LAMP_SYMBOLS, S1_PATHS,
};
pub use zm::{zm_alphabet, zm_decode, zm_encode, zm_presentation};

use crate::automata::{
    all_words, complement, compose, cylindrify, deconvolve, equivalent, from_atm,
    functionality_witness, identity, intersect, minimize, project, shortest_accepted, to_atm,
    transpose, unique_image, Alphabet, Symbol, SyncAutomaton, TapeVector, Word,
    FunctionalityWitness,
};
use crate::error::{Error, Result};
use crate::oracles::{Group, OracleGroup};

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 7] = ["z1", "z2", "z3", "f2", "f3", "lamplighter", "lamplighter-s1"];

pub fn preset(name: &str) -> Result<GraphPresentation> {
    match name {
        "z1" | "z" => zm_presentation(1),
        "z2" => zm_presentation(2),
        "z3" => zm_presentation(3),
        "f2" => free_group_presentation(2),
        "f3" => free_group_presentation(3),
        "lamplighter" => lamplighter_presentation(),
        "lamplighter-s1" => lamplighter_s1_presentation(),
        _ => Err(Error::NotFound(format!(
            "unknown presentation '{name}' (known: {})",
            PRESET_NAMES.join(", ")
        ))),
    }
}

/// Restricts a two-tape relation to `L ⊗ L` and minimizes it.
pub fn restrict_to_domain(r: &SyncAutomaton, domain: &SyncAutomaton) -> Result<SyncAutomaton> {
    let r = intersect(r, &cylindrify(domain, 1)?)?;
    Ok(minimize(&intersect(&r, &cylindrify(domain, 0)?)?))
}

#[derive(Clone, Debug)]
pub struct GraphPresentation {
    name: String,
    domain: SyncAutomaton,
    edges: Vec<SyncAutomaton>,
    labels: Vec<String>,
    inverse: Option<Vec<usize>>,
    base_word: Word,
}

impl GraphPresentation {
    /// Checks shapes only; see [`validate`] for the semantic checks.
    pub fn new(
        name: impl Into<String>,
        domain: SyncAutomaton,
        edges: Vec<SyncAutomaton>,
        labels: Vec<String>,
        inverse: Option<Vec<usize>>,
        base_word: Word,
    ) -> Result<Self> {
        if domain.tapes() != 1 {
            return Err(Error::ArityMismatch {
                expected: 1,
                actual: domain.tapes(),
            });
        }
        if edges.is_empty() {
            return Err(Error::InvalidPresentation("no edge relations".into()));
        }
        for e in &edges {
            if e.tapes() != 2 {
                return Err(Error::ArityMismatch {
                    expected: 2,
                    actual: e.tapes(),
                });
            }
            if e.alphabet() != domain.alphabet() {
                return Err(Error::AlphabetMismatch(
                    "edge relation and domain use different alphabets".into(),
                ));
            }
        }
        if labels.len() != edges.len() {
            return Err(Error::InvalidPresentation(format!(
                "{} label names for {} edge relations",
                labels.len(),
                edges.len()
            )));
        }
        if let Some(p) = &inverse {
            let k = edges.len();
            if p.len() != k || p.iter().enumerate().any(|(j, &i)| i >= k || p[i] != j) {
                return Err(Error::InvalidPresentation(
                    "inverse pairing is not an involution on the labels".into(),
                ));
            }
        }
        domain.alphabet().check_word(&base_word)?;
        Ok(GraphPresentation {
            name: name.into(),
            domain,
            edges,
            labels,
            inverse,
            base_word,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.domain.alphabet()
    }

    pub fn domain(&self) -> &SyncAutomaton {
        &self.domain
    }

    pub fn edges(&self) -> &[SyncAutomaton] {
        &self.edges
    }

    pub fn edge(&self, j: usize) -> &SyncAutomaton {
        &self.edges[j]
    }

    /// Number of generator labels.
    pub fn num_labels(&self) -> usize {
        self.edges.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn inverse_pairing(&self) -> Option<&[usize]> {
        self.inverse.as_deref()
    }

    pub fn base_word(&self) -> &[Symbol] {
        &self.base_word
    }

    pub fn contains(&self, w: &[Symbol]) -> bool {
        self.domain.accepts_word(w)
    }

    /// The image of `x` under label `j`.
    pub fn image(&self, j: usize, x: &[Symbol]) -> Result<Word> {
        let e = self.edges.get(j).ok_or(Error::InvalidLabel {
            label: j,
            labels: self.edges.len(),
        })?;
        if !self.contains(x) {
            return Err(Error::NotInDomain(self.alphabet().render_word(x)));
        }
        unique_image(e, x)
    }

    /// Label index by name.
    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }
}

/// Follows a path of labels from the base word.
pub fn word_of(p: &GraphPresentation, path: &[usize]) -> Result<Word> {
    word_from(p, p.base_word(), path)
}

pub fn word_from(p: &GraphPresentation, start: &[Symbol], path: &[usize]) -> Result<Word> {
    let mut w = start.to_vec();
    for &j in path {
        w = p.image(j, &w)?;
    }
    Ok(w)
}

/// Presentation whose label `i` is the composite of the label path
/// `gens[i].1` in `p`, applied left to right.
pub fn generator_products(
    p: &GraphPresentation,
    gens: &[(String, Vec<usize>)],
    inverse: Option<Vec<usize>>,
) -> Result<GraphPresentation> {
    let edges = gens
        .iter()
        .map(|(_, path)| {
            let mut r = restrict_to_domain(&identity(p.alphabet()), p.domain())?;
            for &j in path {
                let e = p.edges.get(j).ok_or_else(|| Error::InvalidLabel {
                    label: j,
                    labels: p.num_labels(),
                })?;
                r = compose(&r, e)?;
            }
            Ok(r)
        })
        .collect::<Result<Vec<_>>>()?;
    GraphPresentation::new(
        format!("{}-products", p.name),
        p.domain.clone(),
        edges,
        gens.iter().map(|(n, _)| n.clone()).collect(),
        inverse,
        p.base_word.clone(),
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            write!(f, "{} {}", if c.passed { "ok  " } else { "FAIL" }, c.name)?;
            if let Some(d) = &c.detail {
                write!(f, ": {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn render_pair(a: &Alphabet, s: &[TapeVector]) -> String {
    match deconvolve(s, 2) {
        Ok(t) => format!("({}, {})", a.render_word(&t.0[0]), a.render_word(&t.0[1])),
        Err(_) => format!("{s:?}"),
    }
}

/// Checks that every edge relation is a total function on the domain with
/// values in the domain, that paired labels are mutually inverse and that
/// the base word lies in the domain.
pub fn validate(p: &GraphPresentation) -> Result<ValidationReport> {
    let a = p.alphabet();
    let mut checks = Vec::new();
    let mut push = |name: String, detail: Option<String>| {
        checks.push(Check {
            name,
            passed: detail.is_none(),
            detail,
        })
    };
    push(
        "base word in domain".into(),
        (!p.contains(p.base_word())).then(|| a.render_word(p.base_word())),
    );
    let outside = complement(p.domain(), &all_words(a))?;
    for (j, e) in p.edges.iter().enumerate() {
        let label = &p.labels[j];
        let detail = functionality_witness(e, p.domain())?.map(|w| match w {
            FunctionalityWitness::NotTotal { input } => {
                format!("no image for {}", a.render_word(&input))
            }
            FunctionalityWitness::Ambiguous {
                input,
                first,
                second,
            } => format!(
                "{} has images {} and {}",
                a.render_word(&input),
                a.render_word(&first),
                a.render_word(&second)
            ),
        });
        push(format!("edge {label} is a total function"), detail);
        let escaped = intersect(&project(e, &[1])?, &outside)?;
        push(
            format!("edge {label} maps into the domain"),
            shortest_accepted(&escaped).map(|s| {
                let w: Word = s.iter().map(|v| v.get(0)).collect();
                format!("image {} outside the domain", a.render_word(&w))
            }),
        );
        if let Some(inv) = p.inverse_pairing() {
            let i = inv[j];
            if i >= j {
                let diff = equivalent(e, &transpose(&p.edges[i])?)?;
                push(
                    format!("edges {label} and {} are mutually inverse", p.labels[i]),
                    diff.map(|s| format!("differ on {}", render_pair(a, &s))),
                );
            }
        }
    }
    Ok(ValidationReport { checks })
}

/// Outcome of comparing a presentation with an oracle on a ball.
#[derive(Clone, Debug)]
pub struct IsoReport<E> {
    pub radius: usize,
    /// Words and elements in breadth-first order.
    pub mapping: Vec<(Word, E)>,
    pub conflict: Option<String>,
}

impl<E> IsoReport<E> {
    pub fn is_ok(&self) -> bool {
        self.conflict.is_none()
    }
}

/// Explores the ball of the given radius from the base word and the
/// identity in lockstep, label `j` against oracle generator `j`, and reports
/// the first place where the correspondence fails to be a bijection that
/// preserves labelled edges.
pub fn isomorphic_to_oracle<G: Group>(
    p: &GraphPresentation,
    oracle: &OracleGroup<G>,
    radius: usize,
) -> Result<IsoReport<G::Elem>>
where
    G::Elem: Hash,
{
    isomorphic_with(p, oracle, radius, |j, w| p.image(j, w))
}

/// As [`isomorphic_to_oracle`], with the edge map supplied by the caller.
pub fn isomorphic_with<G: Group>(
    p: &GraphPresentation,
    oracle: &OracleGroup<G>,
    radius: usize,
    step: impl Fn(usize, &[Symbol]) -> Result<Word>,
) -> Result<IsoReport<G::Elem>>
where
    G::Elem: Hash,
{
    let k = p.num_labels();
    if oracle.gens().len() != k {
        return Err(Error::InvalidArgument(format!(
            "presentation has {k} labels, oracle has {} generators",
            oracle.gens().len()
        )));
    }
    let a = p.alphabet();
    let mut to_elem: HashMap<Word, G::Elem> = HashMap::new();
    let mut to_word: HashMap<G::Elem, Word> = HashMap::new();
    let mut mapping = Vec::new();
    let start = p.base_word().to_vec();
    let e = oracle.identity();
    to_elem.insert(start.clone(), e.clone());
    to_word.insert(e.clone(), start.clone());
    mapping.push((start.clone(), e.clone()));
    let mut frontier = vec![(start, e)];
    let report = |mapping, conflict| IsoReport {
        radius,
        mapping,
        conflict,
    };
    for _ in 0..radius {
        let mut next = Vec::new();
        for (w, g) in &frontier {
            for j in 0..k {
                let w2 = step(j, w)?;
                let g2 = oracle.apply(g, j);
                match (to_elem.get(&w2), to_word.get(&g2)) {
                    (Some(h), _) if *h != g2 => {
                        let c = format!(
                            "{} --{}--> {} which already stands for {:?}, oracle gives {:?}",
                            a.render_word(w),
                            p.labels[j],
                            a.render_word(&w2),
                            h,
                            g2
                        );
                        return Ok(report(mapping, Some(c)));
                    }
                    (None, Some(v)) => {
                        let c = format!(
                            "{} --{}--> {} but {:?} is already represented by {}",
                            a.render_word(w),
                            p.labels[j],
                            a.render_word(&w2),
                            g2,
                            a.render_word(v)
                        );
                        return Ok(report(mapping, Some(c)));
                    }
                    (Some(_), _) => {}
                    (None, None) => {
                        to_elem.insert(w2.clone(), g2.clone());
                        to_word.insert(g2.clone(), w2.clone());
                        mapping.push((w2.clone(), g2.clone()));
                        next.push((w2, g2));
                    }
                }
            }
        }
        frontier = next;
    }
    Ok(report(mapping, None))
}

#[derive(Serialize, Deserialize)]
struct BundleMeta {
    name: String,
    generators: Vec<String>,
    inverse_pairing: Option<Vec<usize>>,
    base_word: String,
}

/// Writes `domain.atm`, `edge_<j>.atm` (labels from 0) and `meta.json`.
pub fn save_bundle(p: &GraphPresentation, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("domain.atm"), to_atm(p.domain()))?;
    for (j, e) in p.edges.iter().enumerate() {
        fs::write(dir.join(format!("edge_{j}.atm")), to_atm(e))?;
    }
    let meta = BundleMeta {
        name: p.name.clone(),
        generators: p.labels.clone(),
        inverse_pairing: p.inverse.clone(),
        base_word: p.alphabet().render_word(p.base_word()),
    };
    fs::write(dir.join("meta.json"), serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

pub fn load_bundle(dir: &Path) -> Result<GraphPresentation> {
    let meta: BundleMeta = serde_json::from_str(&fs::read_to_string(dir.join("meta.json"))?)?;
    let domain = from_atm(&fs::read_to_string(dir.join("domain.atm"))?)?;
    let edges = (0..meta.generators.len())
        .map(|j| from_atm(&fs::read_to_string(dir.join(format!("edge_{j}.atm")))?))
        .collect::<Result<Vec<_>>>()?;
    let base = domain.alphabet().parse_word(&meta.base_word)?;
    GraphPresentation::new(meta.name, domain, edges, meta.generators, meta.inverse_pairing, base)
}

/// A preset name or a bundle directory.
pub fn resolve(source: &str) -> Result<GraphPresentation> {
    let path = Path::new(source);
    if path.join("meta.json").is_file() {
        load_bundle(path)
    } else {
        preset(source)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{oracle_free, oracle_lamplighter, oracle_lamplighter_s1, oracle_zm};

    #[test]
    fn presets_validate() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            let r = validate(&p).unwrap();
            assert!(r.is_ok(), "{name}:\n{r}");
        }
    }

    #[test]
    fn presets_match_oracles() {
        let r = isomorphic_to_oracle(&preset("z2").unwrap(), &oracle_zm(2).unwrap(), 6).unwrap();
        assert!(r.is_ok(), "{:?}", r.conflict);
        assert_eq!(r.mapping.len(), 2 * 36 + 2 * 6 + 1);
        for (w, g) in &r.mapping {
            assert_eq!(&zm_encode(g), w);
        }
        let r = isomorphic_to_oracle(&preset("f2").unwrap(), &oracle_free(2).unwrap(), 5).unwrap();
        assert!(r.is_ok(), "{:?}", r.conflict);
        for (w, g) in &r.mapping {
            assert_eq!(&free_encode(2, g), w);
        }
        let r = isomorphic_to_oracle(&preset("lamplighter").unwrap(), &oracle_lamplighter(), 7).unwrap();
        assert!(r.is_ok(), "{:?}", r.conflict);
        for (w, g) in &r.mapping {
            assert_eq!(&lamplighter_encode(g), w);
        }
        let r = isomorphic_to_oracle(&preset("lamplighter-s1").unwrap(), &oracle_lamplighter_s1(), 4)
            .unwrap();
        assert!(r.is_ok(), "{:?}", r.conflict);
    }

    #[test]
    fn broken_edge_is_reported() {
        let p = preset("z1").unwrap();
        // Swap the two edge relations: still functions, but the wrong ones.
        let q = GraphPresentation::new(
            "swapped",
            p.domain().clone(),
            vec![p.edge(1).clone(), p.edge(0).clone()],
            p.labels().to_vec(),
            p.inverse_pairing().map(|s| s.to_vec()),
            Word::new(),
        )
        .unwrap();
        assert!(validate(&q).unwrap().is_ok());
        let r = isomorphic_to_oracle(&q, &oracle_zm(1).unwrap(), 3).unwrap();
        // Reflection is an automorphism of the unlabelled graph, but the
        // labels are swapped: p maps to -1, which the oracle calls +1.
        assert!(r.is_ok());
        assert_eq!(r.mapping[1].0, p.alphabet().parse_word("n").unwrap());

        let dropped = GraphPresentation::new(
            "partial",
            p.domain().clone(),
            vec![p.edge(0).clone(), p.edge(0).clone()],
            p.labels().to_vec(),
            None,
            Word::new(),
        )
        .unwrap();
        let r = isomorphic_to_oracle(&dropped, &oracle_zm(1).unwrap(), 2).unwrap();
        assert!(!r.is_ok());
    }

    #[test]
    fn non_functional_edge_fails_validation() {
        let p = preset("z1").unwrap();
        let both = crate::automata::union(p.edge(0), p.edge(1)).unwrap();
        let q = GraphPresentation::new(
            "bad",
            p.domain().clone(),
            vec![both, p.edge(1).clone()],
            p.labels().to_vec(),
            None,
            Word::new(),
        )
        .unwrap();
        let r = validate(&q).unwrap();
        assert!(!r.is_ok());
        assert!(r.failures().any(|c| c.detail.as_deref().unwrap().contains("has images")));
    }

    #[test]
    fn bundle_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = preset("lamplighter").unwrap();
        save_bundle(&p, dir.path()).unwrap();
        let q = resolve(dir.path().to_str().unwrap()).unwrap();
        assert_eq!(q.labels(), p.labels());
        assert_eq!(q.base_word(), p.base_word());
        for (a, b) in p.edges().iter().zip(q.edges()) {
            assert_eq!(equivalent(a, b).unwrap(), None);
        }
    }

    #[test]
    fn unknown_preset() {
        assert!(matches!(preset("q7"), Err(Error::NotFound(_))));
    }
}
