//! Translations of LTL(~) formulas into arithmetic.
//!
//! A team is either a third-order family `𝔞` of binary relations `S` with
//! `S(j,k)` iff `p_k` holds at position `j`, or a pair `(I, P)` with
//! `P(i,j,k)` iff `p_k` holds at position `j` of trace `i ∈ I`.

use std::collections::BTreeMap;

use super::{and_all, numeral, or_all, Arith, ArithError, ArithType, Term};
use crate::formula::{DesugarOptions, Formula};
use crate::kripke::Kripke;

/// Proposition name to its index `k ≥ 1`.
pub type PropNumbering = BTreeMap<String, u64>;

/// Number the propositions of `phi`.
///
/// Names `p1, p2, …` keep their own index; otherwise propositions are
/// numbered `1, 2, …` in order of first occurrence.
pub fn prop_numbering(phi: &Formula) -> PropNumbering {
    let props = phi.props();
    let indexed: Option<Vec<u64>> = props
        .iter()
        .map(|p| {
            p.strip_prefix('p')
                .filter(|d| !d.starts_with('0'))
                .and_then(|d| d.parse::<u64>().ok())
                .filter(|&k| k >= 1)
        })
        .collect();
    match indexed {
        Some(ks) => props.into_iter().zip(ks).collect(),
        None => props.into_iter().zip(1..).collect(),
    }
}

/// Number `K`'s alphabet first, then the remaining propositions of `phi`.
pub fn prop_numbering_for(phi: &Formula, k: &Kripke) -> PropNumbering {
    let mut out: PropNumbering = k.alphabet().names().iter().cloned().zip(1..).collect();
    for p in phi.props() {
        let next = out.len() as u64 + 1;
        out.entry(p).or_insert(next);
    }
    out
}

/// Reduce to `⊤, ⊥, p, ¬p, ∧, ∨, ∼, X, U`.
pub fn to_core(phi: &Formula) -> Formula {
    let d = phi.desugar_with(DesugarOptions {
        neg_to_singleton: true,
    });
    core(&d)
}

fn core(f: &Formula) -> Formula {
    use Formula::*;
    match f {
        Top | Bot | Prop(_) => f.clone(),
        Neg(a) => match &**a {
            Prop(_) => f.clone(),
            // ¬φ holds iff every singleton falsifies φ
            other => core(&other.clone().bneg().sing_all().desugar()),
        },
        And(a, b) => core(a).and(core(b)),
        SplitOr(a, b) => core(a).or(core(b)),
        BNeg(a) => core(a).bneg(),
        Next(a) => core(a).next(),
        Until(a, b) => core(a).until(core(b)),
        Future(a) => Top.until(core(a)),
        Globally(a) => Top.until(core(a).bneg()).bneg(),
        Release(a, b) => core(a).bneg().until(core(b).bneg()).bneg(),
        other => core(&other.desugar()),
    }
}

struct Names {
    next: usize,
}

impl Names {
    fn fresh(&mut self, base: &str) -> String {
        self.next += 1;
        format!("{base}{}", self.next)
    }
}

fn v(x: &str) -> Term {
    Term::var(x)
}

fn fo() -> ArithType {
    ArithType::First
}

fn rel2() -> ArithType {
    ArithType::Second(2)
}

fn fam() -> ArithType {
    ArithType::Third(vec![2])
}

fn index(nums: &PropNumbering, p: &str) -> Result<u64, ArithError> {
    nums.get(p)
        .copied()
        .ok_or_else(|| ArithError::Unsupported(format!("proposition `{p}` has no number")))
}

// ---------------------------------------------------------------- ρ_𝔞

/// `p` or `¬p`, with its polarity.
fn literal(f: &Formula) -> Option<(&str, bool)> {
    match f {
        Formula::Prop(p) => Some((p, true)),
        Formula::Neg(a) => match &**a {
            Formula::Prop(p) => Some((p, false)),
            _ => None,
        },
        _ => None,
    }
}

/// `𝔞 →d 𝔟`: `𝔟` is the family of `d`-suffixes of `𝔞`.
fn shift3(a: &str, d: Term, b: &str, n: &mut Names) -> Arith {
    let (s, s2, j, k) = (n.fresh("S"), n.fresh("S"), n.fresh("j"), n.fresh("k"));
    let same = Arith::holds(s.clone(), vec![v(&j), v(&k)])
        .iff(Arith::holds(s2.clone(), vec![v(&j).plus(d), v(&k)]));
    Arith::forall(
        s.clone(),
        rel2(),
        Arith::member(b, vec![s.clone()]).iff(Arith::exists(
            s2.clone(),
            rel2(),
            Arith::member(a, vec![s2.clone()])
                .and(Arith::forall(j, fo(), Arith::forall(k, fo(), same))),
        )),
    )
}

fn rho3(f: &Formula, a: &str, nums: &PropNumbering, n: &mut Names) -> Result<Arith, ArithError> {
    use Formula::*;
    Ok(match f {
        Top => Arith::True,
        Bot => {
            let s = n.fresh("S");
            Arith::forall(s.clone(), rel2(), Arith::member(a, vec![s]).not())
        }
        Prop(_) | Neg(_) if literal(f).is_some() => {
            let (p, positive) = literal(f).expect("checked");
            let k = index(nums, p)?;
            let s = n.fresh("S");
            let mut atom = Arith::holds(s.clone(), vec![Term::Zero, numeral(k)]);
            if !positive {
                atom = atom.not();
            }
            Arith::forall(s.clone(), rel2(), Arith::member(a, vec![s]).implies(atom))
        }
        And(x, y) => rho3(x, a, nums, n)?.and(rho3(y, a, nums, n)?),
        BNeg(x) => rho3(x, a, nums, n)?.not(),
        SplitOr(x, y) => {
            let (b, c, s) = (n.fresh("b"), n.fresh("c"), n.fresh("S"));
            let cover = Arith::forall(
                s.clone(),
                rel2(),
                Arith::member(a, vec![s.clone()])
                    .iff(Arith::member(b.clone(), vec![s.clone()]).or(Arith::member(c.clone(), vec![s]))),
            );
            let body = cover.and(rho3(x, &b, nums, n)?).and(rho3(y, &c, nums, n)?);
            Arith::exists(b, fam(), Arith::exists(c, fam(), body))
        }
        Next(x) => {
            let b = n.fresh("b");
            let sh = shift3(a, Term::One, &b, n);
            Arith::exists(b.clone(), fam(), sh.and(rho3(x, &b, nums, n)?))
        }
        Until(x, y) => {
            let (d, e, b, c) = (n.fresh("d"), n.fresh("e"), n.fresh("b"), n.fresh("c"));
            let s1 = shift3(a, v(&d), &b, n);
            let s2 = shift3(a, v(&e), &c, n);
            let body = s1
                .and(s2)
                .and(rho3(y, &b, nums, n)?)
                .and(Arith::lt(v(&e), v(&d)).implies(rho3(x, &c, nums, n)?));
            Arith::exists(
                d,
                fo(),
                Arith::forall(e, fo(), Arith::exists(b, fam(), Arith::exists(c, fam(), body))),
            )
        }
        other => return Err(ArithError::Unsupported(format!("`{}` is not in the core fragment", crate::formula::print(other)))),
    })
}

/// `ρ_𝔞(φ)` with free family variable `a`, numbering propositions by [`prop_numbering`].
pub fn emit_rho3(phi: &Formula) -> Result<Arith, ArithError> {
    emit_rho3_with(phi, "a", &prop_numbering(phi))
}

pub fn emit_rho3_with(phi: &Formula, a: &str, nums: &PropNumbering) -> Result<Arith, ArithError> {
    rho3(&to_core(phi), a, nums, &mut Names { next: 0 })
}

/// `∃𝔞 ρ_𝔞(φ)`.
pub fn emit_rho3_sat(phi: &Formula) -> Result<Arith, ArithError> {
    Ok(Arith::exists("a", fam(), emit_rho3(phi)?))
}

// ---------------------------------------------------------------- structures

/// `ψ_frame(W, R)`: `W` is finite, contains `0`, and `R ⊆ W×W` is total.
pub fn psi_frame(w: &str, r: &str) -> Arith {
    let wm = |x: &str| Arith::holds(w, vec![v(x)]);
    Arith::holds(w, vec![Term::Zero])
        .and(Arith::exists(
            "n",
            fo(),
            Arith::forall("m", fo(), wm("m").implies(Arith::lt(v("m"), v("n")))),
        ))
        .and(Arith::forall(
            "m",
            fo(),
            Arith::exists("n", fo(), Arith::holds(r, vec![v("m"), v("n")])),
        ))
        .and(Arith::forall(
            "m",
            fo(),
            Arith::forall(
                "n",
                fo(),
                Arith::holds(r, vec![v("m"), v("n")]).implies(wm("m").and(wm("n"))),
            ),
        ))
}

/// `ψ_path(W, R, π)`: `π` is an `R`-path from `0`.
pub fn psi_path(w: &str, r: &str, pi: &str, j: &str) -> Arith {
    let at = |t: Term| Term::Call(pi.into(), vec![t]);
    Arith::eq(at(Term::Zero), Term::Zero).and(Arith::forall(
        j,
        fo(),
        Arith::holds(w, vec![at(v(j))]).and(Arith::holds(r, vec![at(v(j)), at(v(j).plus(Term::One))])),
    ))
}

/// `ψ_trace(W, R, η̂, S)`: `S` is the trace of some path.
fn psi_trace(w: &str, r: &str, eta: &str, s: &str, n: &mut Names) -> Arith {
    let (pi, j, j2, k) = (n.fresh("pi"), n.fresh("j"), n.fresh("j"), n.fresh("k"));
    let same = Arith::holds(s, vec![v(&j2), v(&k)])
        .iff(Arith::holds(eta, vec![Term::Call(pi.clone(), vec![v(&j2)]), v(&k)]));
    Arith::exists(
        pi.clone(),
        ArithType::Function(1),
        psi_path(w, r, &pi, &j).and(Arith::forall(j2, fo(), Arith::forall(k, fo(), same))),
    )
}

/// `ψ_generated(W, R, η̂, 𝔞)`: `𝔞` holds exactly the traces of the structure.
fn psi_generated(w: &str, r: &str, eta: &str, a: &str, n: &mut Names) -> Arith {
    let s = n.fresh("S");
    let tr = psi_trace(w, r, eta, &s, n);
    Arith::forall(s.clone(), rel2(), Arith::member(a, vec![s]).iff(tr))
}

/// `∃c∃d(0 < d ∧ ∀j∀k(c ≤ j → (X(j,k) ↔ X(j+d,k))))`; with `ulc` the period is the literal `1`.
fn periodic(atom: &dyn Fn(Term, Term) -> Arith, ulc: bool, n: &mut Names) -> Arith {
    let (c, d, j, k) = (n.fresh("c"), n.fresh("d"), n.fresh("j"), n.fresh("k"));
    let period = if ulc { Term::One } else { v(&d) };
    let now = atom(v(&j), v(&k));
    let later = atom(v(&j).plus(period.clone()), v(&k));
    let body = Arith::lt(Term::Zero, period).and(Arith::forall(
        j.clone(),
        fo(),
        Arith::forall(k, fo(), Arith::le(v(&c), v(&j)).implies(now.iff(later))),
    ));
    let body = if ulc { body } else { Arith::exists(d, fo(), body) };
    Arith::exists(c, fo(), body)
}

/// `ψ_ulp(i, P)`, or its ultimately constant variant.
fn psi_ulp(i: &str, p: &str, ulc: bool, n: &mut Names) -> Arith {
    periodic(&|j, k| Arith::holds(p, vec![v(i), j, k]), ulc, n)
}

/// `ψ_generated,ulp(W, R, η̂, I, P)`: `(I, P)` holds exactly the ultimately
/// periodic traces of the structure.
fn psi_generated_ulp(w: &str, r: &str, eta: &str, ip: (&str, &str), ulc: bool, n: &mut Names) -> Arith {
    let (i_set, p) = ip;
    let s = n.fresh("S");
    let tr = psi_trace(w, r, eta, &s, n);
    let per = periodic(&|j, k| Arith::holds(s.clone(), vec![j, k]), ulc, n);
    let (i, j, k) = (n.fresh("i"), n.fresh("j"), n.fresh("k"));
    let stored = Arith::exists(
        i.clone(),
        fo(),
        Arith::holds(i_set, vec![v(&i)]).and(Arith::forall(
            j.clone(),
            fo(),
            Arith::forall(
                k.clone(),
                fo(),
                Arith::holds(s.clone(), vec![v(&j), v(&k)])
                    .iff(Arith::holds(p, vec![v(&i), v(&j), v(&k)])),
            ),
        )),
    );
    Arith::forall(s, rel2(), tr.and(per).iff(stored))
}

/// `K` with states renumbered so that the root is `0`.
fn rooted_order(k: &Kripke) -> Vec<usize> {
    // position in the new order of each old state
    let mut order: Vec<usize> = (0..k.len()).collect();
    order.swap(0, k.root());
    let mut new_of = vec![0; k.len()];
    for (new, &old) in order.iter().enumerate() {
        new_of[old] = new;
    }
    new_of
}

/// `ψ_=W′ ∧ ψ_=R′ ∧ ψ_=η′` for `K`.
pub fn psi_equal_structure(w: &str, r: &str, eta: &str, k: &Kripke, nums: &PropNumbering) -> Result<Arith, ArithError> {
    let m = k.len() as u64;
    let new_of = rooted_order(k);
    let eq_w = Arith::forall(
        "n",
        fo(),
        Arith::holds(w, vec![v("n")]).iff(Arith::lt(v("n"), numeral(m))),
    );
    let mut edges: Vec<(u64, u64)> = k
        .edges()
        .into_iter()
        .map(|(a, b)| (new_of[a] as u64, new_of[b] as u64))
        .collect();
    edges.sort_unstable();
    let eq_r = Arith::forall(
        "n",
        fo(),
        Arith::forall(
            "m",
            fo(),
            Arith::holds(r, vec![v("n"), v("m")]).iff(or_all(edges.iter().map(|&(i, j)| {
                Arith::eq(v("n"), numeral(i)).and(Arith::eq(v("m"), numeral(j)))
            }))),
        ),
    );
    let mut pairs = vec![];
    for old in 0..k.len() {
        for q in k.label(old).iter() {
            pairs.push((new_of[old] as u64, index(nums, k.alphabet().name(q))?));
        }
    }
    pairs.sort_unstable();
    let eq_eta = Arith::forall(
        "n",
        fo(),
        Arith::forall(
            "k",
            fo(),
            Arith::holds(eta, vec![v("n"), v("k")]).iff(or_all(pairs.iter().map(|&(i, j)| {
                Arith::eq(v("n"), numeral(i)).and(Arith::eq(v("k"), numeral(j)))
            }))),
        ),
    );
    Ok(eq_w.and(eq_r).and(eq_eta))
}

fn structure_prefix(body: Arith, team: &[(&str, ArithType)]) -> Arith {
    let mut out = body;
    for (x, t) in team.iter().rev() {
        out = Arith::exists(*x, t.clone(), out);
    }
    for (x, t) in [("eta", rel2()), ("R", rel2()), ("W", ArithType::Second(1))] {
        out = Arith::exists(x, t, out);
    }
    out
}

/// `∃W∃R∃η̂∃𝔞(ψ_frame ∧ ψ_generated ∧ ρ_𝔞(φ))`.
pub fn emit_rho3_finsat(phi: &Formula) -> Result<Arith, ArithError> {
    let nums = prop_numbering(phi);
    let mut n = Names { next: 0 };
    let rho = rho3(&to_core(phi), "a", &nums, &mut n)?;
    let body = psi_frame("W", "R")
        .and(psi_generated("W", "R", "eta", "a", &mut n))
        .and(rho);
    Ok(structure_prefix(body, &[("a", fam())]))
}

/// The finite-satisfiability sentence with `ψ_generated` strengthened to pin down `K`.
pub fn emit_rho3_mc(phi: &Formula, k: &Kripke) -> Result<Arith, ArithError> {
    let nums = prop_numbering_for(phi, k);
    let mut n = Names { next: 0 };
    let rho = rho3(&to_core(phi), "a", &nums, &mut n)?;
    let body = psi_frame("W", "R")
        .and(psi_generated("W", "R", "eta", "a", &mut n).and(psi_equal_structure("W", "R", "eta", k, &nums)?))
        .and(rho);
    Ok(structure_prefix(body, &[("a", fam())]))
}

// ---------------------------------------------------------------- ρ_{I,P}

/// `P →d Q`: `Q` is `P` shifted by `d`.
fn shift2(p: &str, d: Term, q: &str, n: &mut Names) -> Arith {
    let (i, j, k) = (n.fresh("i"), n.fresh("j"), n.fresh("k"));
    let body = Arith::holds(q, vec![v(&i), v(&j), v(&k)])
        .iff(Arith::holds(p, vec![v(&i), v(&j).plus(d), v(&k)]));
    Arith::forall(i, fo(), Arith::forall(j, fo(), Arith::forall(k, fo(), body)))
}

fn rho2(f: &Formula, ip: (&str, &str), nums: &PropNumbering, n: &mut Names) -> Result<Arith, ArithError> {
    use Formula::*;
    let (set, p) = ip;
    let rel3 = ArithType::Second(3);
    let rel1 = ArithType::Second(1);
    Ok(match f {
        Top => Arith::True,
        Bot => {
            let i = n.fresh("i");
            Arith::forall(i.clone(), fo(), Arith::holds(set, vec![v(&i)]).not())
        }
        Prop(_) | Neg(_) if literal(f).is_some() => {
            let (q, positive) = literal(f).expect("checked");
            let k = index(nums, q)?;
            let i = n.fresh("i");
            let mut atom = Arith::holds(p, vec![v(&i), Term::Zero, numeral(k)]);
            if !positive {
                atom = atom.not();
            }
            Arith::forall(i.clone(), fo(), Arith::holds(set, vec![v(&i)]).implies(atom))
        }
        And(x, y) => rho2(x, ip, nums, n)?.and(rho2(y, ip, nums, n)?),
        BNeg(x) => rho2(x, ip, nums, n)?.not(),
        SplitOr(x, y) => {
            let (i1, i2, i) = (n.fresh("I"), n.fresh("I"), n.fresh("i"));
            let cover = Arith::forall(
                i.clone(),
                fo(),
                Arith::holds(set, vec![v(&i)]).iff(
                    Arith::holds(i1.clone(), vec![v(&i)]).or(Arith::holds(i2.clone(), vec![v(&i)])),
                ),
            );
            let body = cover
                .and(rho2(x, (&i1, p), nums, n)?)
                .and(rho2(y, (&i2, p), nums, n)?);
            Arith::exists(i1, rel1.clone(), Arith::exists(i2, rel1, body))
        }
        Next(x) => {
            let q = n.fresh("P");
            let sh = shift2(p, Term::One, &q, n);
            Arith::exists(q.clone(), rel3, sh.and(rho2(x, (set, &q), nums, n)?))
        }
        Until(x, y) => {
            let (d, e, p1, p2) = (n.fresh("d"), n.fresh("e"), n.fresh("P"), n.fresh("P"));
            let s1 = shift2(p, v(&d), &p1, n);
            let s2 = shift2(p, v(&e), &p2, n);
            let body = s1
                .and(s2)
                .and(rho2(y, (set, &p1), nums, n)?)
                .and(Arith::lt(v(&e), v(&d)).implies(rho2(x, (set, &p2), nums, n)?));
            Arith::exists(
                d,
                fo(),
                Arith::forall(
                    e,
                    fo(),
                    Arith::exists(p1, rel3.clone(), Arith::exists(p2, rel3, body)),
                ),
            )
        }
        other => return Err(ArithError::Unsupported(format!("`{}` is not in the core fragment", crate::formula::print(other)))),
    })
}

/// `ρ_{I,P}(φ)` with free variables `I` and `P`.
pub fn emit_rho2(phi: &Formula) -> Result<Arith, ArithError> {
    emit_rho2_with(phi, ("I", "P"), &prop_numbering(phi))
}

pub fn emit_rho2_with(phi: &Formula, ip: (&str, &str), nums: &PropNumbering) -> Result<Arith, ArithError> {
    rho2(&to_core(phi), ip, nums, &mut Names { next: 0 })
}

fn ip_prefix(body: Arith) -> Arith {
    Arith::exists("I", ArithType::Second(1), Arith::exists("P", ArithType::Second(3), body))
}

/// `∃I∃P ρ_{I,P}(φ)`: satisfiable by a countable team.
pub fn emit_rho2_sat(phi: &Formula) -> Result<Arith, ArithError> {
    Ok(ip_prefix(emit_rho2(phi)?))
}

fn rho2_sat_periodic(phi: &Formula, ulc: bool) -> Result<Arith, ArithError> {
    let nums = prop_numbering(phi);
    let mut n = Names { next: 0 };
    let rho = rho2(&to_core(phi), ("I", "P"), &nums, &mut n)?;
    let i = n.fresh("i");
    let all = Arith::forall(
        i.clone(),
        fo(),
        Arith::holds("I", vec![v(&i)]).implies(psi_ulp(&i, "P", ulc, &mut n)),
    );
    Ok(ip_prefix(rho.and(all)))
}

/// `∃I∃P(ρ_{I,P}(φ) ∧ ∀i(I(i) → ψ_ulp(i, P)))`.
pub fn emit_rho2_sat_ulp(phi: &Formula) -> Result<Arith, ArithError> {
    rho2_sat_periodic(phi, false)
}

/// As [`emit_rho2_sat_ulp`] with the period fixed to `1`.
pub fn emit_rho2_sat_ulc(phi: &Formula) -> Result<Arith, ArithError> {
    rho2_sat_periodic(phi, true)
}

fn ulp_structure(body: Arith) -> Arith {
    structure_prefix(
        body,
        &[("I", ArithType::Second(1)), ("P", ArithType::Second(3))],
    )
}

/// `∃W∃R∃η̂∃I∃P(ψ_frame ∧ ψ_generated,ulp ∧ ρ_{I,P}(φ))`.
pub fn emit_rho2_finsat_ulp(phi: &Formula) -> Result<Arith, ArithError> {
    let nums = prop_numbering(phi);
    let mut n = Names { next: 0 };
    let rho = rho2(&to_core(phi), ("I", "P"), &nums, &mut n)?;
    let body = psi_frame("W", "R")
        .and(psi_generated_ulp("W", "R", "eta", ("I", "P"), false, &mut n))
        .and(rho);
    Ok(ulp_structure(body))
}

/// The ultimately periodic model-checking sentence for `K`.
pub fn emit_rho2_mc_ulp(phi: &Formula, k: &Kripke) -> Result<Arith, ArithError> {
    let nums = prop_numbering_for(phi, k);
    let mut n = Names { next: 0 };
    let rho = rho2(&to_core(phi), ("I", "P"), &nums, &mut n)?;
    let body = and_all([
        psi_frame("W", "R"),
        psi_generated_ulp("W", "R", "eta", ("I", "P"), false, &mut n),
        psi_equal_structure("W", "R", "eta", k, &nums)?,
        rho,
    ]);
    Ok(ulp_structure(body))
}
