//! Shared strategies and brute-force helpers.
#![allow(dead_code)]

use proptest::prelude::*;
use tltl::gen::{self, FormulaGen, Kind};
use tltl::{Alphabet, Formula, Label, LassoTrace, Team};

pub fn ab() -> Alphabet {
    Alphabet::new(["p", "q"]).unwrap()
}

pub fn label(props: usize) -> impl Strategy<Value = Label> {
    (0u32..1 << props).prop_map(move |m| Label::from_indices((0..props).filter(|i| m >> i & 1 == 1)))
}

pub fn lasso(props: usize, max_prefix: usize, max_loop: usize) -> impl Strategy<Value = LassoTrace> {
    (
        prop::collection::vec(label(props), 0..=max_prefix),
        prop::collection::vec(label(props), 1..=max_loop),
    )
        .prop_map(|(p, c)| LassoTrace::new(p, c).unwrap())
}

/// Teams over `{p, q}` with up to `max` traces.
pub fn team(max: usize) -> impl Strategy<Value = Team> {
    prop::collection::vec(lasso(2, 2, 2), 0..=max).prop_map(|ts| Team::new(ab(), ts).unwrap())
}

/// Formulas drawn from a seeded generator over `{p, q}`.
pub fn formula(kinds: &'static [Kind], height: usize, td: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |s| FormulaGen::new(&["p", "q"], kinds, height, td).sample(&mut gen::rng(s)))
}

pub fn x_free(height: usize, td: usize) -> impl Strategy<Value = Formula> {
    any::<u64>().prop_map(move |s| {
        FormulaGen::new(&["p", "q"], Kind::ALL, height, td)
            .without(Kind::Next)
            .sample(&mut gen::rng(s))
    })
}

/// All submasks of `m`, including `0` and `m`.
pub fn submasks(m: u128) -> Vec<u128> {
    let mut out = vec![];
    let mut s = m;
    loop {
        out.push(s);
        if s == 0 {
            break;
        }
        s = (s - 1) & m;
    }
    out
}
