//! Structure analyses against a direct path-simulation oracle.

mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use tltl::forge::{gadget, VarKind};
use tltl::gen;
use tltl::kripke::{path_words, Countability, Kripke};
use tltl::{check_classical, Alphabet, Label, LassoTrace};

fn structure(seed: u64) -> Kripke {
    gen::random_kripke(&mut gen::rng(seed), &ab(), 4)
}

/// Run the subset simulation along `t`. Once the state set seen at loop
/// entries repeats, the rest of the run repeats too, so a bounded number of
/// loop turns decides membership.
fn member_oracle(k: &Kripke, t: &LassoTrace) -> bool {
    if k.label(k.root()) != t.at(0) {
        return false;
    }
    let mut cur: BTreeSet<usize> = BTreeSet::from([k.root()]);
    let (p, l) = (t.prefix().len(), t.cycle().len());
    let mut seen = vec![];
    let mut i = 0;
    loop {
        if i >= p && (i - p) % l == 0 {
            if seen.contains(&cur) {
                return true;
            }
            seen.push(cur.clone());
        }
        let next = t.at(i + 1);
        cur = cur
            .iter()
            .flat_map(|&w| k.successors(w).iter().copied())
            .filter(|&v| k.label(v) == next)
            .collect();
        if cur.is_empty() {
            return false;
        }
        i += 1;
    }
}

fn over(k: &Kripke) -> impl Strategy<Value = LassoTrace> {
    let labels: Vec<Label> = (0..k.len()).map(|w| k.label(w)).collect();
    let pick = prop::sample::select(labels);
    (prop::collection::vec(pick.clone(), 0..=3), prop::collection::vec(pick, 1..=3))
        .prop_map(|(p, c)| LassoTrace::new(p, c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn membership_matches_simulation((k, t) in any::<u64>().prop_map(structure).prop_flat_map(|k| { let s = over(&k); (Just(k), s) })) {
        prop_assert_eq!(k.trace_member(&t), member_oracle(&k, &t));
    }

    #[test]
    fn enumeration_is_sound_and_complete(seed in any::<u64>()) {
        let k = structure(seed);
        let listed: BTreeSet<LassoTrace> = k.enumerate_ulp_traces(2, 2).unwrap().into_iter().collect();
        for t in &listed {
            prop_assert!(member_oracle(&k, t));
            prop_assert!(t.is_normalized());
            prop_assert!(path_words(&k, 4).contains(&(0..4).map(|i| t.at(i)).collect::<Vec<_>>()));
        }
        // every member with small prefix and loop is listed
        let labels: BTreeSet<Label> = (0..k.len()).map(|w| k.label(w)).collect();
        let labels: Vec<Label> = labels.into_iter().collect();
        let words = |n: usize| -> Vec<Vec<Label>> {
            (0..n).fold(vec![vec![]], |acc, _| {
                acc.iter().flat_map(|w| labels.iter().map(move |l| { let mut v = w.clone(); v.push(*l); v })).collect()
            })
        };
        for p in 0..=2 {
            for l in 1..=2 {
                for pre in words(p) {
                    for cyc in words(l) {
                        let t = LassoTrace::new(pre.clone(), cyc).unwrap();
                        if t.is_normalized() && member_oracle(&k, &t) {
                            prop_assert!(listed.contains(&t), "{} missing", t.display(k.alphabet()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn chi_accepts_exactly_the_members(seed in any::<u64>(), t in lasso(6, 3, 3)) {
        let k = structure(seed);
        let (k2, chi) = k.chi_formula().unwrap();
        // the strategy draws from 6 propositions; keep those the marked alphabet has
        let width = k2.alphabet().len();
        let t = t.project(&Label::from_indices(0..width.min(6)));
        prop_assert_eq!(check_classical(k2.alphabet(), &t, &chi).unwrap(), k2.trace_member(&t));
        for m in k2.enumerate_ulp_traces(2, 2).unwrap() {
            prop_assert!(check_classical(k2.alphabet(), &m, &chi).unwrap());
        }
    }

    #[test]
    fn all_ulp_structures_have_few_traces(seed in any::<u64>()) {
        let k = structure(seed);
        if k.countability_class() == Countability::AllUlp {
            // the number of member lassos grows polynomially; a branching
            // cycle would double it with every extra loop position
            let small = k.enumerate_ulp_traces(3, 3).unwrap().len();
            let large = k.enumerate_ulp_traces(6, 6).unwrap().len();
            prop_assert!(large <= 100 * small.max(1), "{small} then {large}");
        }
    }
}

#[test]
fn gadget_classes() {
    assert_eq!(gadget(VarKind::SecondOrderUnary).countability_class(), Countability::Uncountable);
    assert_eq!(gadget(VarKind::FirstOrder).countability_class(), Countability::AllUlp);
    let a = Alphabet::new(["0"]).unwrap();
    let zero = a.label(["0"]).unwrap();
    let flip = Kripke::new(a, 2, &[(0, 1), (1, 0)], vec![zero, zero], 0).unwrap();
    assert_eq!(flip.enumerate_ulp_traces(4, 4).unwrap(), vec![LassoTrace::constant(zero)]);
}

#[test]
fn one_state_chi() {
    let a = Alphabet::new(["q"]).unwrap();
    let k = Kripke::new(a.clone(), 1, &[(0, 0)], vec![a.label(["q"]).unwrap()], 0).unwrap();
    let (_, chi) = k.chi_formula().unwrap();
    assert_eq!(tltl::print(&chi), "@pw_0 & G (@pw_0 & q & X @pw_0)");
}

#[test]
fn file_round_trip_and_validation() {
    let k = structure(11);
    let f = k.to_file();
    let back = Kripke::from_file(&f).unwrap();
    assert_eq!(back.to_file(), f);
    let mut bad = f.clone();
    bad.root = 99;
    assert!(!tltl::kripke::validate_file(&bad).is_empty());
}
