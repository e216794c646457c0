//! Evaluator properties checked against brute-force semantics.

mod common;

use common::*;
use proptest::prelude::*;
use tltl::eval::SplitMode;
use tltl::gen::Kind;
use tltl::{check, check_classical, check_with, EvalConfig, Evaluator, Formula, Team};

fn singles(t: &Team) -> Vec<Team> {
    t.traces().iter().map(|x| Team::new(t.alphabet().clone(), vec![x.clone()]).unwrap()).collect()
}

/// `T_γ` as a mask, from singleton checks.
fn guard_mask(t: &Team, g: &Formula) -> u128 {
    singles(t)
        .iter()
        .enumerate()
        .filter(|(_, s)| check(s, g).unwrap())
        .fold(0, |m, (i, _)| m | 1 << i)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn singleton_agrees_with_classical(f in formula(Kind::PURE, 6, 3), t in lasso(2, 4, 4)) {
        let team = Team::new(ab(), vec![t.clone()]).unwrap();
        prop_assert_eq!(check(&team, &f).unwrap(), check_classical(&ab(), &t, &f).unwrap());
    }

    #[test]
    fn empty_team_satisfies_tilde_free(f in formula(Kind::TILDE_FREE, 5, 2)) {
        prop_assert!(check(&Team::empty(ab()), &f).unwrap());
    }

    #[test]
    fn tilde_free_is_downward_closed(f in formula(Kind::TILDE_FREE, 4, 2), t in team(5)) {
        let mut ev = Evaluator::new(&t, EvalConfig::default()).unwrap();
        let full = ev.full_mask();
        let sat: Vec<(u128, bool)> = submasks(full).into_iter().map(|m| (m, ev.check_at(&f, 0, m).unwrap())).collect();
        for &(m, b) in &sat {
            if b {
                for &(s, c) in &sat {
                    if s & !m == 0 {
                        prop_assert!(c, "{} holds on mask {m:b} but not on {s:b}", tltl::print(&f));
                    }
                }
            }
        }
    }

    #[test]
    fn sugar_agrees_with_desugaring(f in formula(Kind::ALL, 4, 1), t in team(4)) {
        prop_assert_eq!(check(&t, &f).unwrap(), check(&t, &f.desugar()).unwrap());
    }

    #[test]
    fn native_dep_agrees_with_definition(args in prop::collection::vec(formula(Kind::ALL, 2, 1), 0..3), c in formula(Kind::ALL, 2, 1), t in team(5)) {
        let d = Formula::dep(args, c);
        let native = EvalConfig { native_dep: true, ..EvalConfig::default() };
        let defined = EvalConfig { native_dep: false, ..EvalConfig::default() };
        prop_assert_eq!(check_with(&t, &d, native).unwrap().0, check_with(&t, &d, defined).unwrap().0);
    }

    #[test]
    fn split_modes_agree(f in formula(Kind::ALL, 4, 2), t in team(4)) {
        let three = EvalConfig { split: SplitMode::ThreeWay, ..EvalConfig::default() };
        prop_assert_eq!(check(&t, &f).unwrap(), check_with(&t, &f, three).unwrap().0);
    }

    #[test]
    fn shuffled_split_order_is_irrelevant(f in formula(Kind::ALL, 4, 2), t in team(4), seed in any::<u64>()) {
        let shuffled = EvalConfig { shuffle_seed: Some(seed), ..EvalConfig::default() };
        prop_assert_eq!(check(&t, &f).unwrap(), check_with(&t, &f, shuffled).unwrap().0);
    }

    #[test]
    fn singleton_quantifiers(f in formula(Kind::ALL, 3, 1), t in team(5)) {
        let each: Vec<bool> = singles(&t).iter().map(|s| check(s, &f).unwrap()).collect();
        prop_assert_eq!(check(&t, &f.clone().sing_ex()).unwrap(), each.iter().any(|&b| b));
        prop_assert_eq!(check(&t, &f.sing_all()).unwrap(), each.iter().all(|&b| b));
    }

    #[test]
    fn subteam_quantifiers(f in formula(Kind::ALL, 3, 1), t in team(5)) {
        let mut ev = Evaluator::new(&t, EvalConfig::default()).unwrap();
        let full = ev.full_mask();
        let all: Vec<bool> = submasks(full).into_iter().map(|m| ev.check_at(&f, 0, m).unwrap()).collect();
        prop_assert_eq!(check(&t, &f.clone().sub_ex()).unwrap(), all.iter().any(|&b| b));
        prop_assert_eq!(check(&t, &f.sub_all()).unwrap(), all.iter().all(|&b| b));
    }

    #[test]
    fn conditional_quantifiers_shrink_the_guarded_part(g in formula(Kind::PURE, 2, 1), f in formula(Kind::ALL, 3, 1), t in team(5)) {
        let yes = guard_mask(&t, &g);
        let mut ev = Evaluator::new(&t, EvalConfig::default()).unwrap();
        let rest = ev.full_mask() & !yes;
        let sub = submasks(yes).into_iter().any(|s| ev.check_at(&f, 0, rest | s).unwrap());
        let single = (0..t.len()).filter(|i| yes >> i & 1 == 1).any(|i| ev.check_at(&f, 0, rest | 1 << i).unwrap());
        prop_assert_eq!(check(&t, &Formula::cond_sub_ex(g.clone(), f.clone())).unwrap(), sub);
        prop_assert_eq!(check(&t, &Formula::cond_sing_ex(g.clone(), f.clone())).unwrap(), single);
        let hook = check(&t.subteam_mask(yes), &f).unwrap();
        prop_assert_eq!(check(&t, &g.hook(f)).unwrap(), hook);
    }

    #[test]
    fn temporal_dualities(f in formula(Kind::ALL, 3, 1), h in formula(Kind::ALL, 3, 1), t in team(4)) {
        let tilde = |x: Formula| x.bneg();
        prop_assert_eq!(check(&t, &f.clone().globally()).unwrap(), check(&t, &tilde(tilde(f.clone()).future())).unwrap());
        prop_assert_eq!(check(&t, &f.clone().future()).unwrap(), check(&t, &Formula::Top.until(f.clone())).unwrap());
        prop_assert_eq!(
            check(&t, &f.clone().release(h.clone())).unwrap(),
            check(&t, &tilde(tilde(f).until(tilde(h)))).unwrap()
        );
    }
}

#[test]
fn motivating_team() {
    let a = ab();
    let p = a.label(["p"]).unwrap();
    let e = tltl::Label::EMPTY;
    let t = Team::new(
        a,
        vec![
            tltl::LassoTrace::new(vec![p], vec![e]).unwrap(),
            tltl::LassoTrace::new(vec![e, p], vec![e]).unwrap(),
        ],
    )
    .unwrap();
    assert!(!check(&t, &tltl::parse("F p").unwrap()).unwrap());
    assert!(check(&t, &tltl::parse("F p | F p").unwrap()).unwrap());
    // ¬ is evaluated trace by trace, so it differs from ∼ on this team
    assert!(!check(&t, &tltl::parse("!F p").unwrap()).unwrap());
    assert!(check(&t, &tltl::parse("~F p").unwrap()).unwrap());
}

#[test]
fn budget_is_enforced() {
    let t = Team::new(
        ab(),
        (0..6)
            .map(|i| tltl::LassoTrace::new(vec![tltl::Label::EMPTY; i], vec![tltl::Label::singleton(0)]).unwrap())
            .collect(),
    )
    .unwrap();
    let f = tltl::parse("(F p | F p) | (F p | F q)").unwrap();
    let tight = EvalConfig { budget: 5, ..EvalConfig::default() };
    assert!(matches!(check_with(&t, &f, tight), Err(tltl::EvalError::BudgetExceeded(5))));
}
