//! Seeded property suites shared by the acceptance harness and the CLI.
//!
//! Each suite returns a one-line summary on success and the first failing
//! case otherwise. Oracles are brute force: classical evaluation, integer
//! and set comparisons, exhaustive subteam enumeration.

use std::collections::BTreeSet;
use std::fmt::Display;
use std::time::{Duration, Instant};

use rand::Rng;

use crate::arith::{
    bounded_eval_env, cantor_pair, cantor_unpair, normal::psi2, normal::random_sentence,
    normalize_arity, parse_arith, shape_check, Env, Term, Value,
};
use crate::eval::probe::{equiv_check, ProbeBudget};
use crate::eval::{check, check_classical, EvalConfig, Evaluator};
use crate::forge::{
    arith_to_mc, build_bounded_universe, gadget, mc2sat, translate_rho, translate_rho_in, Layout,
    Mc2SatMode, SetSpec, VarKind,
};
use crate::formula::{fragment_check, parse, print, Formula, FragmentMode, TemporalOp};
use crate::gen::{self, FormulaGen, Kind, LassoShape};
use crate::kripke::{Countability, Kripke};
use crate::stutter::{canonical_stutter_free, expand, random_spec, stutter_equivalent};
use crate::team::Team;
use crate::trace::{Alphabet, Label, LassoTrace};

type Outcome = Result<String, String>;

pub struct Suite {
    pub name: &'static str,
    pub title: &'static str,
    pub limit: Duration,
    run: fn(u64) -> Outcome,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub name: &'static str,
    pub title: &'static str,
    /// Property held and the run stayed within `limit`.
    pub pass: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Duration,
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

static SUITES: &[Suite] = &[
    Suite { name: "motivating", title: "two-trace example: F p fails, F p | F p holds", limit: secs(1), run: motivating },
    Suite { name: "singleton", title: "singleton teams agree with classical LTL", limit: secs(30), run: singleton },
    Suite { name: "downward", title: "downward closure of ~-free formulas, empty team", limit: secs(60), run: downward },
    Suite { name: "equivalence", title: "temporal dualities and sugar expansions", limit: secs(120), run: equivalence },
    Suite { name: "stutter", title: "stutter canonicalization and X-free invariance", limit: secs(120), run: stutter },
    Suite { name: "chi", title: "characteristic formula matches structure traces", limit: secs(60), run: chi },
    Suite { name: "pairing", title: "Cantor pairing and normal-form shape", limit: secs(30), run: pairing },
    Suite { name: "atoms", title: "translated atoms agree with their arithmetic meaning", limit: secs(120), run: atoms },
    Suite { name: "lemma", title: "bounded universes decide small sentences", limit: secs(60), run: lemma },
    Suite { name: "countability", title: "countability classification of structures", limit: secs(10), run: countability },
    Suite { name: "fragment", title: "reduction outputs stay in their fragments", limit: secs(60), run: fragment },
];

pub fn suites() -> &'static [Suite] {
    SUITES
}

/// Run one suite; `None` for an unknown name.
pub fn run(name: &str, seed: u64) -> Option<SuiteReport> {
    let s = SUITES.iter().find(|s| s.name == name)?;
    let start = Instant::now();
    let res = (s.run)(seed);
    let elapsed = start.elapsed();
    let (ok, mut detail) = match res {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if ok && elapsed > s.limit {
        detail = format!("{detail}; too slow ({:.1}s > {}s)", elapsed.as_secs_f64(), s.limit.as_secs());
    }
    Some(SuiteReport {
        name: s.name,
        title: s.title,
        pass: ok && elapsed <= s.limit,
        detail,
        elapsed,
        limit: s.limit,
    })
}

fn e<E: Display>(err: E) -> String {
    err.to_string()
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn lasso(a: &Alphabet, prefix: &[&[&str]], cycle: &[&[&str]]) -> LassoTrace {
    let lab = |ls: &[&[&str]]| ls.iter().map(|l| a.label(l.iter().copied()).expect("known props")).collect();
    LassoTrace::new(lab(prefix), lab(cycle)).expect("non-empty loop")
}

fn team(a: &Alphabet, traces: Vec<LassoTrace>) -> Team {
    Team::new(a.clone(), traces).expect("labels within alphabet")
}

fn formula(src: &str) -> Formula {
    parse(src).expect("fixed formula parses")
}

// ------------------------------------------------------------------ suites

fn motivating(_seed: u64) -> Outcome {
    let a = Alphabet::new(["p"]).map_err(e)?;
    let t = team(&a, vec![lasso(&a, &[&["p"]], &[&[]]), lasso(&a, &[&[], &["p"]], &[&[]])]);
    let f = check(&t, &formula("F p")).map_err(e)?;
    let ff = check(&t, &formula("F p | F p")).map_err(e)?;
    ensure!(!f, "F p holds on the team");
    ensure!(ff, "F p | F p fails on the team");
    Ok("F p = false, F p | F p = true".into())
}

fn singleton(seed: u64) -> Outcome {
    let a = Alphabet::new(["p", "q"]).map_err(e)?;
    let g = FormulaGen::new(&["p", "q"], Kind::PURE, 6, 3);
    let shape = LassoShape { max_prefix: 4, max_loop: 4 };
    let mut r = gen::rng(seed);
    let n = 1000;
    for _ in 0..n {
        let f = g.sample(&mut r);
        let t = gen::random_lasso(&mut r, a.len(), shape);
        let team_val = check(&team(&a, vec![t.clone()]), &f).map_err(e)?;
        let classical = check_classical(&a, &t, &f).map_err(e)?;
        ensure!(
            team_val == classical,
            "mismatch on {} for {}: team {team_val}, classical {classical}",
            t.display(&a),
            print(&f)
        );
    }
    Ok(format!("{n} cases, 0 mismatches"))
}

fn downward(seed: u64) -> Outcome {
    let a = Alphabet::new(["p", "q"]).map_err(e)?;
    let mut r = gen::rng(seed);
    let shape = LassoShape { max_prefix: 2, max_loop: 2 };
    let mut pool: Vec<LassoTrace> = vec![];
    while pool.len() < 6 {
        let t = gen::random_lasso(&mut r, a.len(), shape).normalize();
        if !pool.contains(&t) {
            pool.push(t);
        }
    }
    // every team of ≤ 4 pool traces is a subteam of some 4-element team
    let mut quads = vec![];
    for i in 0..6 {
        for j in i + 1..6 {
            for k in j + 1..6 {
                for l in k + 1..6 {
                    quads.push(team(&a, vec![pool[i].clone(), pool[j].clone(), pool[k].clone(), pool[l].clone()]));
                }
            }
        }
    }
    let g = FormulaGen::new(&["p", "q"], Kind::TILDE_FREE, 4, 2);
    let empty = Team::empty(a.clone());
    let mut evaluations = 0usize;
    for _ in 0..200 {
        let f = g.sample(&mut r);
        ensure!(check(&empty, &f).map_err(e)?, "empty team fails {}", print(&f));
        for q in &quads {
            let mut ev = Evaluator::new(q, EvalConfig::default()).map_err(e)?;
            let mut sat = [false; 16];
            for (m, s) in sat.iter_mut().enumerate() {
                *s = ev.check_at(&f, 0, m as u128).map_err(e)?;
            }
            evaluations += 16;
            for m in 0..16usize {
                if !sat[m] {
                    continue;
                }
                for b in 0..4 {
                    let sub = m & !(1 << b);
                    ensure!(
                        sat[sub],
                        "{} holds on {} but not on {}",
                        print(&f),
                        q.subteam_mask(m as u128).display(),
                        q.subteam_mask(sub as u128).display()
                    );
                }
            }
        }
    }
    Ok(format!("200 formulas x {} four-trace teams ({evaluations} subteam evaluations), 0 violations", quads.len()))
}

fn sugar_root<R: Rng>(k: Kind, g: &FormulaGen, r: &mut R) -> Formula {
    let mut s = || g.sample(r);
    match k {
        Kind::Dep => {
            let args = vec![s(), s()];
            Formula::dep(args, s())
        }
        Kind::BOr => s().bor(s()),
        Kind::BImp => s().bimp(s()),
        Kind::BIff => s().biff(s()),
        Kind::Hook => s().hook(s()),
        Kind::SubEx => s().sub_ex(),
        Kind::SubAll => s().sub_all(),
        Kind::SingEx => s().sing_ex(),
        Kind::SingAll => s().sing_all(),
        Kind::CondSubEx => Formula::cond_sub_ex(s(), s()),
        Kind::CondSubAll => Formula::cond_sub_all(s(), s()),
        Kind::CondSingEx => Formula::cond_sing_ex(s(), s()),
        Kind::CondSingAll => Formula::cond_sing_all(s(), s()),
        _ => s(),
    }
}

fn equivalence(seed: u64) -> Outcome {
    let a = Alphabet::new(["p", "q"]).map_err(e)?;
    let shape = LassoShape { max_prefix: 2, max_loop: 2 };
    let teams: Vec<Team> = gen::team_sampler(seed, a.clone(), 4, shape, 500).collect();
    let g = FormulaGen::new(&["p", "q"], Kind::ALL, 3, 1);
    let mut r = gen::rng(seed ^ 0x5eed);
    let identities = ["G", "F", "R", "dep", "sugar"];
    for (n, id) in identities.iter().enumerate() {
        for (i, t) in teams.iter().enumerate() {
            let (lhs, rhs, lhs_cfg) = match n {
                0 => {
                    let f = g.sample(&mut r);
                    (f.clone().globally(), f.bneg().future().bneg(), EvalConfig::default())
                }
                1 => {
                    let f = g.sample(&mut r);
                    (f.clone().future(), Formula::Top.until(f), EvalConfig::default())
                }
                2 => {
                    let (f, h) = (g.sample(&mut r), g.sample(&mut r));
                    (f.clone().release(h.clone()), f.bneg().until(h.bneg()).bneg(), EvalConfig::default())
                }
                3 => {
                    let nargs = r.gen_range(0..=3);
                    let args = (0..nargs).map(|_| g.sample(&mut r)).collect();
                    let d = Formula::dep(args, g.sample(&mut r));
                    let native = EvalConfig { native_dep: true, ..EvalConfig::default() };
                    (d.clone(), d.desugar(), native)
                }
                _ => {
                    let k = Kind::SUGAR[i % Kind::SUGAR.len()];
                    let f = sugar_root(k, &g, &mut r);
                    let d = f.desugar();
                    (f, d, EvalConfig::default())
                }
            };
            let l = Evaluator::new(t, lhs_cfg).map_err(e)?.check(&lhs).map_err(e)?;
            let rcfg = EvalConfig { native_dep: false, ..EvalConfig::default() };
            let rv = Evaluator::new(t, rcfg).map_err(e)?.check(&rhs).map_err(e)?;
            ensure!(
                l == rv,
                "{id}: {} is {l} but {} is {rv} on {}",
                print(&lhs),
                print(&rhs),
                t.display()
            );
        }
    }
    let control = equiv_check(
        &formula("F p | F p"),
        &formula("F p"),
        gen::team_sampler(seed.wrapping_add(1), a.clone(), 4, shape, 100),
        ProbeBudget { max_samples: 100, eval: EvalConfig::default() },
    )
    .map_err(e)?;
    ensure!(control.found(), "negative control found no counterexample in 100 samples");
    Ok(format!("5 identities x {} teams, 0 counterexamples; control separated", teams.len()))
}

/// The two teams of the stutter-equivalence figure, with `a = ∅` and `b = {p}`.
pub fn figure_four_teams() -> (Team, Team) {
    let a = Alphabet::new(["p"]).expect("valid");
    let row = |s: &str| -> Vec<Label> {
        s.chars()
            .map(|c| if c == 'b' { a.label(["p"]).expect("p") } else { Label::EMPTY })
            .collect()
    };
    let tr = |pre: &str, cyc: &str| LassoTrace::new(row(pre), row(cyc)).expect("non-empty loop");
    let t = team(&a, vec![tr("bbaabb", "a"), tr("aaaaaa", "b")]);
    let t2 = team(&a, vec![tr("baab", "a"), tr("aaaa", "b")]);
    (t, t2)
}

fn stutter(seed: u64) -> Outcome {
    let a = Alphabet::new(["p", "q"]).map_err(e)?;
    let shape = LassoShape { max_prefix: 3, max_loop: 3 };
    let mut r = gen::rng(seed);
    for _ in 0..500 {
        let t = gen::random_team(&mut r, &a, 3, shape);
        let c = canonical_stutter_free(&t).map_err(e)?;
        ensure!(canonical_stutter_free(&c).map_err(e)?.same_set(&c), "not idempotent on {}", t.display());
        let spec = random_spec(&mut r, &t).map_err(e)?;
        let x = expand(&t, &spec).map_err(e)?;
        ensure!(
            canonical_stutter_free(&x).map_err(e)?.same_set(&c),
            "expansion {:?} of {} changes the canonical team",
            spec,
            t.display()
        );
    }

    let (f1, f2) = figure_four_teams();
    ensure!(stutter_equivalent(&f1, &f2).map_err(e)?, "figure teams not stutter-equivalent");

    let b = Alphabet::new(["p", "q", "z"]).map_err(e)?;
    let one = |pre: &[&[&str]]| team(&b, vec![lasso(&b, pre, &[&["z"]])]);
    let ppq = one(&[&["p"], &["p"], &["q"]]);
    let pqq = one(&[&["p"], &["q"], &["q"]]);
    let pz = one(&[&["p"]]);
    ensure!(stutter_equivalent(&ppq, &pqq).map_err(e)?, "{{p}}{{p}}{{q}}{{z}}^w vs {{p}}{{q}}{{q}}{{z}}^w");
    ensure!(!stutter_equivalent(&ppq, &pz).map_err(e)?, "{{p}}{{p}}{{q}}{{z}}^w vs {{p}}{{z}}^w");

    let small = LassoShape { max_prefix: 2, max_loop: 2 };
    let xfree = FormulaGen::new(&["p", "q"], Kind::ALL, 4, 2).without(Kind::Next);
    for _ in 0..1000 {
        let f = xfree.sample(&mut r);
        let t = gen::random_team(&mut r, &a, 3, small);
        let spec = random_spec(&mut r, &t).map_err(e)?;
        let x = expand(&t, &spec).map_err(e)?;
        let (u, v) = (check(&t, &f).map_err(e)?, check(&x, &f).map_err(e)?);
        ensure!(u == v, "{} is {u} on {} but {v} on its expansion {}", print(&f), t.display(), x.display());
    }

    let with_x = FormulaGen::new(&["p", "q"], Kind::PURE, 3, 2);
    let mut found = None;
    for i in 0..5000 {
        let f = with_x.sample(&mut r);
        let t = gen::random_team(&mut r, &a, 2, small);
        let spec = random_spec(&mut r, &t).map_err(e)?;
        let x = expand(&t, &spec).map_err(e)?;
        if check(&t, &f).map_err(e)? != check(&x, &f).map_err(e)? {
            found = Some(i + 1);
            break;
        }
    }
    let Some(tries) = found else {
        return Err("no X-bearing formula distinguished a team from its expansion".into());
    };
    Ok(format!("500 canonical checks, figure and examples, 1000 X-free cases; X case after {tries} tries"))
}

/// Normalized lassos with prefix and loop ≤ 4 that satisfy `χ = first ∧ G body`.
///
/// `body` looks one step ahead, so its truth at a position depends only on
/// that letter and the next. Letters and pairs are classified by classical
/// evaluation on two-letter lassos, which prunes the search without assuming
/// anything about the structure.
fn chi_models(al: &Alphabet, chi: &Formula) -> Result<BTreeSet<LassoTrace>, String> {
    let (Formula::And(first, g), m) = (chi, al.len()) else {
        return Err("unexpected shape of the characteristic formula".into());
    };
    let Formula::Globally(body) = g.as_ref() else {
        return Err("unexpected shape of the characteristic formula".into());
    };
    let letters: Vec<Label> = (0..1u32 << m)
        .map(|bits| Label::from_indices((0..m).filter(|i| bits >> i & 1 == 1)))
        .collect();
    let mut start = vec![false; letters.len()];
    let mut pair = vec![vec![false; letters.len()]; letters.len()];
    for (i, &x) in letters.iter().enumerate() {
        start[i] = check_classical(al, &LassoTrace::constant(x), first).map_err(e)?;
        for (j, &y) in letters.iter().enumerate() {
            let t = LassoTrace::new(vec![x], vec![y]).map_err(e)?;
            pair[i][j] = check_classical(al, &t, body).map_err(e)?;
        }
    }
    let mut out = BTreeSet::new();
    let mut stack: Vec<Vec<usize>> = (0..letters.len()).filter(|&i| start[i]).map(|i| vec![i]).collect();
    while let Some(w) = stack.pop() {
        let len = w.len();
        for l in 1..=len.min(4) {
            let p = len - l;
            if p > 4 || !pair[w[len - 1]][w[p]] {
                continue;
            }
            let t = LassoTrace::new(
                w[..p].iter().map(|&i| letters[i]).collect(),
                w[p..].iter().map(|&i| letters[i]).collect(),
            )
            .map_err(e)?;
            if t.is_normalized() {
                ensure!(check_classical(al, &t, chi).map_err(e)?, "pruning disagrees with χ on {}", t.display(al));
                out.insert(t);
            }
        }
        if len < 8 {
            let last = w[len - 1];
            for j in (0..letters.len()).filter(|&j| pair[last][j]) {
                let mut v = w.clone();
                v.push(j);
                stack.push(v);
            }
        }
    }
    Ok(out)
}

fn chi(seed: u64) -> Outcome {
    let a = Alphabet::new(["p", "q"]).map_err(e)?;
    let mut r = gen::rng(seed);
    let mut total = 0;
    for n in 0..20 {
        let k = gen::random_kripke(&mut r, &a, 5);
        let (k2, chi) = k.chi_formula().map_err(e)?;
        let enumerated: BTreeSet<LassoTrace> = k2.enumerate_ulp_traces(4, 4).map_err(e)?.into_iter().collect();
        let models = chi_models(k2.alphabet(), &chi)?;
        ensure!(
            enumerated == models,
            "structure {n} ({} states): {} enumerated traces vs {} models of χ",
            k.len(),
            enumerated.len(),
            models.len()
        );
        total += models.len();
    }
    Ok(format!("20 structures, {total} bounded traces, sets equal"))
}

fn pairing(seed: u64) -> Outcome {
    let mut seen = BTreeSet::new();
    for x in 0..30 {
        for y in 0..30 {
            let z = cantor_pair(x, y).map_err(e)?;
            ensure!(cantor_unpair(z) == (x, y), "unpair(pair({x},{y})) = {:?}", cantor_unpair(z));
            ensure!(seen.insert(z), "pair({x},{y}) = {z} repeats");
        }
    }
    for z in 0..435 {
        let (x, y) = cantor_unpair(z);
        ensure!(cantor_pair(x, y).map_err(e)? == z, "pair(unpair({z})) differs");
    }
    let f = psi2(Term::var("a"), Term::var("b"), Term::var("t"));
    let mut cases = 0;
    for x in 0..8 {
        for y in 0..8 {
            let z = cantor_pair(x, y).map_err(e)?;
            for t in 0..z + 8 {
                let env: Env = [("a", x), ("b", y), ("t", t)]
                    .into_iter()
                    .map(|(k, v)| (k.to_string(), Value::Num(v)))
                    .collect();
                let got = bounded_eval_env(&f, &env, 8, 1).map_err(e)?;
                ensure!(got == (t == z), "psi2({x},{y},{t}) = {got}");
                cases += 1;
            }
        }
    }
    let mut r = gen::rng(seed);
    for _ in 0..50 {
        let s = random_sentence(&mut r, 4);
        let n = normalize_arity(&s).map_err(e)?;
        shape_check(&n).map_err(|err| format!("normal form of {s} fails the shape check: {err}"))?;
    }
    Ok(format!("bijective on [0,30)^2, {cases} psi2 cases, 50 normal forms"))
}

fn subsets_upto(n: u64, max: usize) -> Vec<BTreeSet<u64>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize <= max)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

fn atoms(_seed: u64) -> Outcome {
    let fo = VarKind::FirstOrder;
    let l = Layout::new([("x", fo), ("y", fo)]).map_err(e)?;
    let lt = translate_rho_in(&parse_arith("(lt x y)").map_err(e)?, &l).map_err(e)?;
    for a in 0..=12 {
        for b in 0..=12 {
            let t = Team::new(
                l.alphabet().clone(),
                vec![l.encode_number("x", a).map_err(e)?, l.encode_number("y", b).map_err(e)?],
            )
            .map_err(e)?;
            ensure!(check(&t, &lt).map_err(e)? == (a < b), "x<y wrong at ({a},{b})");
        }
    }

    let l = Layout::new([("x", fo), ("A", VarKind::SecondOrderUnary)]).map_err(e)?;
    let holds = translate_rho_in(&parse_arith("(holds A x)").map_err(e)?, &l).map_err(e)?;
    let sets = subsets_upto(11, 4);
    let mut member_cases = 0;
    for s in &sets {
        let enc = l.encode_set("A", &SetSpec::Finite(s.clone())).map_err(e)?;
        for n in 0..=10 {
            let t = Team::new(l.alphabet().clone(), vec![l.encode_number("x", n).map_err(e)?, enc.clone()])
                .map_err(e)?;
            ensure!(check(&t, &holds).map_err(e)? == s.contains(&n), "A(x) wrong at n={n}, A={s:?}");
            member_cases += 1;
        }
    }

    let l = Layout::new([("f", VarKind::ThirdOrderUnary), ("A", VarKind::SecondOrderUnary)]).map_err(e)?;
    let member = translate_rho_in(&parse_arith("(member f A)").map_err(e)?, &l).map_err(e)?;
    let all = subsets_upto(6, 6);
    let as_fam = |s: &BTreeSet<u64>| l.encode_set("f", &SetSpec::Finite(s.clone()));
    let as_set = |s: &BTreeSet<u64>| l.encode_set("A", &SetSpec::Finite(s.clone()));
    let fam_enc: Vec<LassoTrace> = all.iter().map(as_fam).collect::<Result<_, _>>().map_err(e)?;
    let set_enc: Vec<LassoTrace> = all.iter().map(as_set).collect::<Result<_, _>>().map_err(e)?;
    let n = all.len();
    let mut families: Vec<Vec<usize>> = vec![vec![]];
    for i in 0..n {
        families.push(vec![i]);
        for j in i + 1..n {
            families.push(vec![i, j]);
            for k in j + 1..n {
                families.push(vec![i, j, k]);
            }
        }
    }
    // one evaluator per family over the family plus every set; cases pick subteams by mask
    let mut family_cases = 0;
    for fam in &families {
        let mut traces: Vec<LassoTrace> = fam.iter().map(|&i| fam_enc[i].clone()).collect();
        traces.extend(set_enc.iter().cloned());
        let t = Team::new(l.alphabet().clone(), traces).map_err(e)?;
        let pos = |x: &LassoTrace| t.traces().iter().position(|y| y == x).expect("trace in team");
        let fam_mask = fam.iter().fold(0u128, |m, &i| m | 1 << pos(&fam_enc[i]));
        let mut ev = Evaluator::new(&t, EvalConfig::default()).map_err(e)?;
        for (s, enc) in set_enc.iter().enumerate() {
            let got = ev.check_at(&member, 0, fam_mask | 1 << pos(enc)).map_err(e)?;
            ensure!(
                got == fam.contains(&s),
                "membership wrong for A={:?} in family {:?}",
                all[s],
                fam.iter().map(|&i| &all[i]).collect::<Vec<_>>()
            );
            family_cases += 1;
        }
    }
    Ok(format!("169 order cases, {member_cases} membership cases, {family_cases} family cases"))
}

fn lemma(_seed: u64) -> Outcome {
    let cases = [
        ("(exists (x 1) (exists (y 1) (lt x y)))", 4, true),
        ("(exists (x 1) (lt x x))", 4, false),
        ("(exists (A (2 1)) (exists (x 1) (holds A x)))", 3, true),
    ];
    let mut out = vec![];
    for (src, bound, want) in cases {
        let f = parse_arith(src).map_err(e)?;
        let (_, t) = build_bounded_universe(&f, bound).map_err(e)?;
        let rho = translate_rho(&f).map_err(e)?;
        let got = check(&t, &rho).map_err(e)?;
        ensure!(got == want, "{src} at bound {bound}: got {got}");
        out.push(format!("{got}"));
    }
    Ok(format!("results {}", out.join(", ")))
}

fn countability(_seed: u64) -> Outcome {
    let rel = gadget(VarKind::SecondOrderUnary);
    ensure!(rel.countability_class() == Countability::Uncountable, "relation gadget not uncountable");

    let a = Alphabet::new(["0", "1"]).map_err(e)?;
    let labels = (0..3).map(|i| Label::from_indices([i % 2])).collect();
    let chain = Kripke::new(a.clone(), 3, &[(0, 0), (0, 1), (1, 1), (1, 2), (2, 2)], labels, 0).map_err(e)?;
    ensure!(chain.countability_class() == Countability::AllUlp, "self-loop chain not all-ulp");

    let zero = a.label(["0"]).map_err(e)?;
    let flip = Kripke::new(a.clone(), 2, &[(0, 1), (1, 0)], vec![zero, zero], 0).map_err(e)?;
    let traces = flip.enumerate_ulp_traces(4, 4).map_err(e)?;
    ensure!(
        traces == vec![LassoTrace::constant(zero)],
        "two-state example yields {} traces",
        traces.len()
    );
    Ok("relation gadget uncountable, chain all-ulp, flip-flop gives {0}^w".into())
}

const FRAGMENT_SENTENCES: &[&str] = &[
    "(exists (x 1) (exists (y 1) (lt x y)))",
    "(forall (x 1) (exists (y 1) (lt x y)))",
    "(forall (A (2 1)) (exists (x 1) (holds A x)))",
    "(exists (R (2 2)) (forall (x 1) (exists (y 1) (holds R x y))))",
    "(exists (a (3 1)) (forall (A (2 1)) (iff (member a A) (not (member a A)))))",
    "(forall (x 1) (exists (y 1) (eq (plus x (one)) y)))",
];

/// Two states labelled `{p}` and `{q}`; the second loops.
fn sample_structure() -> Result<Kripke, String> {
    let a = Alphabet::new(["p", "q"]).map_err(e)?;
    let labels = vec![a.label(["p"]).map_err(e)?, a.label(["q"]).map_err(e)?];
    Kripke::new(a, 2, &[(0, 1), (1, 0), (1, 1)], labels, 0).map_err(e)
}

const MC_FORMULAS: &[&str] = &["F p", "F p | G q", "~F (p & q)", "G F p", "p ~> F q"];

fn fragment_outputs(seed: u64) -> Result<Vec<(String, Formula, usize)>, String> {
    let mut out = vec![];
    let mut sentences: Vec<_> = FRAGMENT_SENTENCES
        .iter()
        .map(|s| parse_arith(s).map_err(e))
        .collect::<Result<_, _>>()?;
    let mut r = gen::rng(seed);
    sentences.extend((0..20).map(|_| random_sentence(&mut r, 4)));
    for s in &sentences {
        let (_, rho, _) = arith_to_mc(s).map_err(e)?;
        out.push((format!("rho {s}"), rho, 1));
    }
    let k = sample_structure()?;
    for src in MC_FORMULAS {
        let phi = parse(src).map_err(e)?;
        for mode in [Mc2SatMode::XFree, Mc2SatMode::UlcXFree] {
            out.push((format!("{mode} {src}"), mc2sat(&phi, &k, mode).map_err(e)?, 2));
        }
        if fragment_check(&phi, &f_only_set(), 1, FragmentMode::Lenient) {
            out.push((format!("finiteUlc {src}"), mc2sat(&phi, &k, Mc2SatMode::FiniteUlc).map_err(e)?, 2));
        }
    }
    Ok(out)
}

fn f_only_set() -> BTreeSet<TemporalOp> {
    TemporalOp::parse_set("F").expect("F is an operator")
}

fn fragment(seed: u64) -> Outcome {
    let first = fragment_outputs(seed)?;
    let second = fragment_outputs(seed)?;
    for ((name, f, depth), (_, g, _)) in first.iter().zip(&second) {
        ensure!(
            fragment_check(f, &f_only_set(), *depth, FragmentMode::Lenient),
            "{name}: output outside LTL_{depth}(~,F)"
        );
        ensure!(print(f) == print(g), "{name}: output differs between runs");
    }
    ensure!(first.len() == second.len(), "run lengths differ");
    Ok(format!("{} outputs in fragment and stable", first.len()))
}

/// Reference outputs of the reductions, as `(file name, contents)`.
///
/// Each file holds one output per line, in a fixed order.
pub fn goldens() -> Result<Vec<(String, String)>, String> {
    let mut files = vec![];
    let mut rho = String::new();
    for src in FRAGMENT_SENTENCES {
        let s = parse_arith(src).map_err(e)?;
        let (_, f, _) = arith_to_mc(&s).map_err(e)?;
        rho.push_str(&print(&f));
        rho.push('\n');
    }
    files.push(("rho.txt".to_string(), rho));
    let k = sample_structure()?;
    for mode in Mc2SatMode::ALL {
        let mut text = String::new();
        for src in MC_FORMULAS {
            let phi = parse(src).map_err(e)?;
            match mc2sat(&phi, &k, mode) {
                Ok(f) => text.push_str(&print(&f)),
                Err(err) => text.push_str(&format!("error: {err}")),
            }
            text.push('\n');
        }
        files.push((format!("mc2sat_{}.txt", mode.name()), text));
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure_four_is_an_expansion() {
        let (t, t2) = figure_four_teams();
        assert_eq!(canonical_stutter_free(&t).unwrap(), canonical_stutter_free(&t2).unwrap());
        assert_eq!(canonical_stutter_free(&t).unwrap().horizon().unwrap().total(), 4);
    }

    #[test]
    fn quick_suites_pass() {
        for name in ["motivating", "lemma", "countability"] {
            let rep = run(name, 1).unwrap();
            assert!(rep.pass, "{name}: {}", rep.detail);
        }
        assert!(run("nope", 1).is_none());
    }
}
