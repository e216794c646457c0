//! Arithmetic toolkit: pairing, prenex form, arity normalization, emitters.

use std::collections::BTreeSet;

use proptest::prelude::*;
use tltl::arith::normal::{psi2, random_sentence};
use tltl::arith::prenex::is_prenex;
use tltl::arith::*;
use tltl::parse;

fn fo(n: &str) -> Term {
    Term::var(n)
}

/// Small sentences over first-order `x`, `y` and a unary `A`, with
/// quantifiers nested anywhere.
fn sentence() -> impl Strategy<Value = Arith> {
    let atom = (0..4u8, 0..2usize, 0..2usize).prop_map(|(k, a, b)| {
        let v = |i: usize| fo(["x", "y"][i]);
        match k {
            0 => Arith::lt(v(a), v(b)),
            1 => Arith::eq(v(a).plus(Term::One), v(b)),
            2 => Arith::holds("A", vec![v(a)]),
            _ => Arith::le(v(a), v(b)),
        }
    });
    atom.prop_recursive(4, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Arith::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.and(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.or(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.implies(b)),
            (any::<bool>(), 0..2usize, inner.clone()).prop_map(|(e, i, b)| {
                let n = ["x", "y"][i];
                if e { Arith::exists(n, ArithType::First, b) } else { Arith::forall(n, ArithType::First, b) }
            }),
            (any::<bool>(), inner).prop_map(|(e, b)| {
                let t = ArithType::Second(1);
                if e { Arith::exists("A", t, b) } else { Arith::forall("A", t, b) }
            }),
        ]
    })
    .prop_map(|body| {
        Arith::exists("x", ArithType::First, Arith::forall("y", ArithType::First, Arith::exists("A", ArithType::Second(1), body)))
    })
    .prop_filter("evaluator caps", |f| f.quantifier_count() <= eval::MAX_QUANTIFIERS)
}

proptest! {
    #[test]
    fn pairing_round_trips(n in 0u64..200, m in 0u64..200) {
        let z = cantor_pair(n, m).unwrap();
        prop_assert_eq!(z, ((n + m) * (n + m) + 3 * n + m) / 2);
        prop_assert_eq!(cantor_unpair(z), (n, m));
    }

    #[test]
    fn tuples_round_trip(t in prop::collection::vec(0u64..6, 1..4)) {
        let z = cantor_tuple(&t).unwrap();
        prop_assert_eq!(cantor_untuple(t.len(), z), t);
    }

    #[test]
    fn set_pairing_round_trips(a in prop::collection::btree_set(0u64..6, 0..4), b in prop::collection::btree_set(0u64..6, 0..4)) {
        let sets = vec![a, b];
        let z = set_pair(&sets).unwrap();
        prop_assert_eq!(set_unpair(2, &z), sets);
    }

    #[test]
    fn prenex_preserves_bounded_truth(f in sentence()) {
        let p = prenex(&f);
        prop_assert!(is_prenex(&p));
        prop_assert!(p.is_closed());
        prop_assert_eq!(bounded_eval(&p, 3, 3).unwrap(), bounded_eval(&f, 3, 3).unwrap(), "{}", print_arith(&p, PrintOptions::default()));
    }

    #[test]
    fn printing_round_trips(f in sentence()) {
        let text = print_arith(&f, PrintOptions::default());
        prop_assert_eq!(parse_arith(&text).unwrap(), f);
    }

    #[test]
    fn normalized_sentences_pass_the_shape_check(seed in any::<u64>(), size in 1usize..6) {
        let f = random_sentence(&mut tltl::gen::rng(seed), size);
        let g = normalize_arity(&f).unwrap();
        prop_assert!(shape_check(&g).is_ok());
        prop_assert!(g.is_closed());
        prop_assert!(is_prenex(&g));
    }
}

#[test]
fn psi2_defines_the_pairing() {
    for a in 0..6u64 {
        for b in 0..6u64 {
            let z = cantor_pair(a, b).unwrap();
            for t in 0..z + 4 {
                let f = psi2(numeral(a), numeral(b), numeral(t));
                let holds = bounded_eval(&f, z + 5, 1).unwrap();
                assert_eq!(holds, t == z, "a={a} b={b} t={t}");
            }
        }
    }
}

#[test]
fn overflow_is_reported() {
    assert!(cantor_pair(u64::MAX, 1).is_err());
}

#[test]
fn emitters_produce_closed_sentences() {
    for src in ["p", "F p | G q", "~X p", "E1[F p] q", "A1[p] F q", "p -> q"] {
        let phi = parse(src).unwrap();
        for f in [emit_rho3_sat(&phi), emit_rho3_finsat(&phi), emit_rho2_sat(&phi), emit_rho2_sat_ulp(&phi), emit_rho2_finsat_ulp(&phi)] {
            let f = f.unwrap_or_else(|e| panic!("{src}: {e}"));
            assert!(f.is_closed(), "{src}: {:?}", f.free_vars());
            f.check_sorts(&Default::default()).unwrap();
        }
        let open: BTreeSet<String> = emit_rho3(&phi).unwrap().free_vars();
        assert_eq!(open, BTreeSet::from(["a".to_string()]), "{src}");
    }
}

#[test]
fn rho3_of_a_proposition() {
    let f = emit_rho3(&parse("p").unwrap()).unwrap();
    assert_eq!(
        print_arith(&f, PrintOptions::default()),
        "(forall (S1 (2 2)) (implies (member a S1) (holds S1 (zero) (one))))"
    );
}

#[test]
fn syntax_errors_are_reported() {
    assert!(parse_arith("(exists (x 1) (lt x").is_err());
    assert!(parse_arith("(frob x)").is_err());
    let f = parse_arith("(exists (A (2 1)) (holds A x y))");
    assert!(f.is_err() || f.unwrap().check_sorts(&Default::default()).is_err());
}
