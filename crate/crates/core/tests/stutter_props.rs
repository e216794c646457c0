//! Stutter-equivalence properties.
//!
//! The single-trace oracle removes repeated letters from a long unrolling and
//! compares the results, which does not go through snapshots at all.

mod common;

use common::*;
use proptest::prelude::*;
use tltl::gen::{self, Kind};
use tltl::stutter::{
    canonical_stutter_free, expand, is_stutter_free, is_stuttering_function, random_spec, stutter_equivalent,
    StutterSpec,
};
use tltl::{check, Alphabet, Label, LassoTrace, Team};

fn compressed(t: &LassoTrace, n: usize) -> Vec<Label> {
    let mut out: Vec<Label> = vec![];
    for i in 0..n {
        let l = t.at(i);
        if out.last() != Some(&l) {
            out.push(l);
        }
    }
    out
}

/// Equal compressed unrollings. Words that keep changing give at least 60
/// letters from 400 positions when spans stay below 6; the cut keeps the
/// ragged end of the unrolling out of the comparison.
fn same_up_to_stutter(a: &LassoTrace, b: &LassoTrace) -> bool {
    let (x, y) = (compressed(a, 400), compressed(b, 400));
    if x.len() >= 50 && y.len() >= 50 {
        x[..50] == y[..50]
    } else {
        x == y
    }
}

fn one(a: &Alphabet, t: LassoTrace) -> Team {
    Team::new(a.clone(), vec![t]).unwrap()
}

fn spec_for(team: &Team, seed: u64) -> StutterSpec {
    random_spec(&mut gen::rng(seed), team).unwrap()
}

/// Every way of covering `t` by two subteams, as mask pairs.
fn covers(n: usize) -> Vec<(u128, u128)> {
    let mut out = vec![];
    let total = 3usize.pow(n as u32);
    for mut c in 0..total {
        let (mut l, mut r) = (0u128, 0u128);
        for i in 0..n {
            match c % 3 {
                0 => l |= 1 << i,
                1 => r |= 1 << i,
                _ => {
                    l |= 1 << i;
                    r |= 1 << i;
                }
            }
            c /= 3;
        }
        out.push((l, r));
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn single_traces_match_the_oracle(a in lasso(1, 3, 3), b in lasso(1, 3, 3)) {
        let al = Alphabet::new(["p"]).unwrap();
        prop_assert_eq!(
            stutter_equivalent(&one(&al, a.clone()), &one(&al, b.clone())).unwrap(),
            same_up_to_stutter(&a, &b)
        );
    }

    #[test]
    fn canonical_form_is_stutter_free_and_idempotent(t in team(4)) {
        let c = canonical_stutter_free(&t).unwrap();
        prop_assert!(is_stutter_free(&c).unwrap());
        prop_assert_eq!(canonical_stutter_free(&c).unwrap(), c.clone());
        prop_assert_eq!(c.len(), t.len());
    }

    #[test]
    fn expansions_share_one_canonical_form(t in team(4), s1 in any::<u64>(), s2 in any::<u64>()) {
        let e1 = expand(&t, &spec_for(&t, s1)).unwrap();
        let e2 = expand(&t, &spec_for(&t, s2)).unwrap();
        prop_assert_eq!(e1.len(), t.len());
        prop_assert_eq!(canonical_stutter_free(&e1).unwrap(), canonical_stutter_free(&e2).unwrap());
        prop_assert!(stutter_equivalent(&t, &e1).unwrap());
    }

    #[test]
    fn identity_is_a_stuttering_function(t in team(4)) {
        let id = StutterSpec::identity(&t).unwrap();
        prop_assert!(is_stuttering_function(&id, &t).unwrap());
        prop_assert!(expand(&t, &id).unwrap().same_set(&t));
    }

    #[test]
    fn x_free_formulas_are_stutter_invariant(f in x_free(4, 2), t in team(3), s in any::<u64>()) {
        let e = expand(&t, &spec_for(&t, s)).unwrap();
        prop_assert_eq!(check(&t, &f).unwrap(), check(&e, &f).unwrap(), "{}", tltl::print(&f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn splitting_preserves_equivalence(t in team(3), s in any::<u64>()) {
        let e = expand(&t, &spec_for(&t, s)).unwrap();
        let ecov = covers(e.len());
        for (l, r) in covers(t.len()) {
            let (t1, t2) = (t.subteam_mask(l), t.subteam_mask(r));
            let found = ecov.iter().any(|&(a, b)| {
                stutter_equivalent(&t1, &e.subteam_mask(a)).unwrap()
                    && stutter_equivalent(&t2, &e.subteam_mask(b)).unwrap()
            });
            prop_assert!(found, "no matching cover for {l:b}/{r:b} of {}", t.display());
        }
    }
}

#[test]
fn x_can_tell_expansions_apart() {
    let a = Alphabet::new(["p", "q"]).unwrap();
    let p = a.label(["p"]).unwrap();
    let q = a.label(["q"]).unwrap();
    let t = one(&a, LassoTrace::new(vec![p], vec![q]).unwrap());
    let e = expand(&t, &StutterSpec { prefix: vec![2], cycle: vec![1] }).unwrap();
    let f = tltl::parse("X q").unwrap();
    assert!(check(&t, &f).unwrap());
    assert!(!check(&e, &f).unwrap());
    // the sampler finds such cases too
    let g = gen::FormulaGen::new(&["p", "q"], Kind::PURE, 3, 2);
    let mut r = gen::rng(3);
    let found = (0..5000).any(|_| {
        let f = g.sample(&mut r);
        let t = gen::random_team(&mut r, &a, 2, gen::LassoShape::default());
        let e = expand(&t, &random_spec(&mut r, &t).unwrap()).unwrap();
        check(&t, &f).unwrap() != check(&e, &f).unwrap()
    });
    assert!(found);
}

#[test]
fn figure_teams() {
    let (t, u) = tltl::props::figure_four_teams();
    assert!(stutter_equivalent(&t, &u).unwrap());
    assert_eq!(canonical_stutter_free(&t).unwrap().horizon().unwrap().total(), 4);
}
