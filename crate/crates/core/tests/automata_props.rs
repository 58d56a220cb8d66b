use cayauto_core::automata::{
    complement, compose, convolve, count_by_length, deconvolve, determinize, enumerate,
    equivalent, from_atm, intersect, minimize, to_atm, transpose, union, universe,
};
use cayauto_core::{Alphabet, SyncAutomaton, TapeVector, WordTuple, PAD};
use proptest::prelude::*;

fn alphabet() -> Alphabet {
    Alphabet::from_chars("ab").unwrap()
}

/// Letters over {a, b, ◇}, excluding all-pad.
fn letters(tapes: usize) -> Vec<TapeVector> {
    let mut out: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..tapes {
        out = out
            .into_iter()
            .flat_map(|p| {
                [0, 1, PAD].into_iter().map(move |s| {
                    let mut p = p.clone();
                    p.push(s);
                    p
                })
            })
            .collect();
    }
    out.into_iter()
        .map(TapeVector::new)
        .filter(|l| !l.is_all_pad())
        .collect()
}

fn automaton(tapes: usize) -> impl Strategy<Value = SyncAutomaton> {
    let nl = letters(tapes).len();
    (1usize..=4)
        .prop_flat_map(move |n| {
            (
                Just(n),
                proptest::collection::vec(0..n, 1..=2),
                proptest::collection::vec(any::<bool>(), n),
                proptest::collection::vec((0..n, 0..nl, 0..n), 0..=12),
            )
        })
        .prop_map(move |(n, init, acc, trans)| {
            let ls = letters(tapes);
            SyncAutomaton::new(
                tapes,
                alphabet(),
                n,
                init,
                acc.iter().enumerate().filter(|(_, &b)| b).map(|(q, _)| q),
                trans.into_iter().map(|(s, l, d)| (s, ls[l].clone(), d)),
            )
            .unwrap()
        })
}

fn word() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::vec(0u8..2, 0..6)
}

fn tuple(tapes: usize) -> impl Strategy<Value = WordTuple> {
    proptest::collection::vec(word(), tapes).prop_map(WordTuple::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn convolution_round_trip(t in (1usize..4).prop_flat_map(tuple)) {
        let s = convolve(&t);
        prop_assert_eq!(deconvolve(&s, t.arity()).unwrap(), t);
    }

    #[test]
    fn normal_forms_preserve_language(
        a in automaton(2),
        ts in proptest::collection::vec(tuple(2), 40),
    ) {
        let d = determinize(&a);
        let m = minimize(&a);
        prop_assert!(d.is_deterministic());
        prop_assert!(m.num_states() <= d.num_states());
        for t in &ts {
            let x = a.accepts(t).unwrap();
            prop_assert_eq!(d.accepts(t).unwrap(), x);
            prop_assert_eq!(m.accepts(t).unwrap(), x);
        }
        prop_assert_eq!(equivalent(&a, &m).unwrap(), None);
        prop_assert_eq!(equivalent(&a, &d).unwrap(), None);
    }

    #[test]
    fn boolean_operations(
        a in automaton(1),
        b in automaton(1),
        ws in proptest::collection::vec(word(), 40),
    ) {
        let i = intersect(&a, &b).unwrap();
        let u = union(&a, &b).unwrap();
        let c = complement(&a, &universe(1, &alphabet())).unwrap();
        for w in &ws {
            let (x, y) = (a.accepts_word(w), b.accepts_word(w));
            prop_assert_eq!(i.accepts_word(w), x && y);
            prop_assert_eq!(u.accepts_word(w), x || y);
            prop_assert_eq!(c.accepts_word(w), !x);
        }
    }

    #[test]
    fn composition_is_associative(a in automaton(2), b in automaton(2), c in automaton(2)) {
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(equivalent(&left, &right).unwrap(), None);
    }

    #[test]
    fn transpose_is_an_involution(a in automaton(2), ts in proptest::collection::vec(tuple(2), 20)) {
        let t = transpose(&a).unwrap();
        prop_assert_eq!(equivalent(&transpose(&t).unwrap(), &a).unwrap(), None);
        for p in &ts {
            let q = WordTuple::new(vec![p.0[1].clone(), p.0[0].clone()]);
            prop_assert_eq!(t.accepts(&q).unwrap(), a.accepts(p).unwrap());
        }
    }

    #[test]
    fn counts_match_enumeration(a in automaton(2)) {
        let all = enumerate(&a, 5);
        for n in 0..=5 {
            let listed = all.iter().filter(|t| convolve(t).len() == n).count();
            prop_assert_eq!(count_by_length(&a, n), listed.into());
        }
    }

    #[test]
    fn text_format_round_trip(a in automaton(2)) {
        prop_assert_eq!(from_atm(&to_atm(&a)).unwrap(), a);
    }
}
