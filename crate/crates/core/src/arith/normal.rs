//! Bounded-arity normal form.
//!
//! The pipeline runs four passes over a prenex sentence, each exposed on its
//! own:
//!
//! 1. [`eliminate_functions`]: quantified functions become graph relations.
//! 2. [`unary_relations`]: `A(t_1..t_ℓ)` becomes `∃x(ψ_ℓ(t̄,x) ∧ A(x))`.
//! 3. [`unary_families`]: `𝔞(A_1..A_k)` becomes `∃B(θ_k(Ā,B) ∧ 𝔞(B))`.
//! 4. [`eliminate_builtins`]: `0, 1, +, ×, =, ≤` become relations defined from `<`.
//!
//! After that, atoms are `𝔞(A)` with both unary, `A(x_1..x_ℓ)` with `ℓ ≤ 3`
//! and first-order variables, or `x < y`.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::prenex::{is_prenex, prenex};
use super::{and_all, fresh_name, numeral, or_all, Arith, ArithError, ArithType, Quant, Term};

struct Namer {
    used: BTreeSet<String>,
}

impl Namer {
    fn new(f: &Arith) -> Self {
        Namer {
            used: f.all_names(),
        }
    }
    fn fresh(&mut self, base: &str) -> String {
        let n = fresh_name(base, &self.used);
        self.used.insert(n.clone());
        n
    }
}

fn v(name: &str) -> Term {
    Term::var(name)
}

/// Apply `atom` to every atomic subformula, keeping the connective structure.
fn map_atoms(f: &Arith, atom: &mut dyn FnMut(&Arith) -> Arith) -> Arith {
    match f {
        Arith::Not(a) => map_atoms(a, atom).not(),
        Arith::And(a, b) => {
            let a = map_atoms(a, atom);
            a.and(map_atoms(b, atom))
        }
        Arith::Or(a, b) => {
            let a = map_atoms(a, atom);
            a.or(map_atoms(b, atom))
        }
        Arith::Implies(a, b) => {
            let a = map_atoms(a, atom);
            a.implies(map_atoms(b, atom))
        }
        Arith::Iff(a, b) => {
            let a = map_atoms(a, atom);
            a.iff(map_atoms(b, atom))
        }
        Arith::Quant(q, x, t, b) => Arith::Quant(*q, x.clone(), t.clone(), Box::new(map_atoms(b, atom))),
        _ => atom(f),
    }
}

/// Rewrite binder types, keeping bodies.
fn map_types(f: &Arith, ty: &dyn Fn(&ArithType) -> ArithType) -> Arith {
    match f {
        Arith::Not(a) => map_types(a, ty).not(),
        Arith::And(a, b) => map_types(a, ty).and(map_types(b, ty)),
        Arith::Or(a, b) => map_types(a, ty).or(map_types(b, ty)),
        Arith::Implies(a, b) => map_types(a, ty).implies(map_types(b, ty)),
        Arith::Iff(a, b) => map_types(a, ty).iff(map_types(b, ty)),
        Arith::Quant(q, x, t, b) => Arith::Quant(*q, x.clone(), ty(t), Box::new(map_types(b, ty))),
        _ => f.clone(),
    }
}

// ---------------------------------------------------------------- functions

fn innermost_call(t: &Term) -> Option<&Term> {
    match t {
        Term::Call(_, args) => args.iter().find_map(innermost_call).or(Some(t)),
        Term::Plus(a, b) | Term::Times(a, b) => innermost_call(a).or_else(|| innermost_call(b)),
        _ => None,
    }
}

fn replace_term(t: &Term, from: &Term, to: &Term) -> Term {
    if t == from {
        return to.clone();
    }
    match t {
        Term::Plus(a, b) => replace_term(a, from, to).plus(replace_term(b, from, to)),
        Term::Times(a, b) => replace_term(a, from, to).times(replace_term(b, from, to)),
        Term::Call(f, args) => Term::Call(f.clone(), args.iter().map(|a| replace_term(a, from, to)).collect()),
        _ => t.clone(),
    }
}

fn atom_terms(f: &Arith) -> Vec<&Term> {
    match f {
        Arith::Eq(a, b) | Arith::Lt(a, b) | Arith::Le(a, b) => vec![a, b],
        Arith::Holds(_, args) => args.iter().collect(),
        _ => vec![],
    }
}

fn map_atom_terms(f: &Arith, g: &dyn Fn(&Term) -> Term) -> Arith {
    match f {
        Arith::Eq(a, b) => Arith::Eq(g(a), g(b)),
        Arith::Lt(a, b) => Arith::Lt(g(a), g(b)),
        Arith::Le(a, b) => Arith::Le(g(a), g(b)),
        Arith::Holds(r, args) => Arith::Holds(r.clone(), args.iter().map(g).collect()),
        _ => f.clone(),
    }
}

fn unfold_calls(atom: &Arith, nm: &mut Namer) -> Arith {
    let Some(call) = atom_terms(atom).into_iter().find_map(innermost_call).cloned() else {
        return atom.clone();
    };
    let Term::Call(f, args) = &call else { unreachable!() };
    let y = nm.fresh("y");
    let rest = map_atom_terms(atom, &|t| replace_term(t, &call, &v(&y)));
    let mut graph_args = args.clone();
    graph_args.push(v(&y));
    Arith::exists(
        y.clone(),
        ArithType::First,
        Arith::holds(f.clone(), graph_args).and(unfold_calls(&rest, nm)),
    )
}

/// `G` is the graph of a total function of arity `k`.
fn functionality(g: &str, k: usize, nm: &mut Namer) -> Arith {
    let xs: Vec<String> = (0..k).map(|_| nm.fresh("x")).collect();
    let (y, y2) = (nm.fresh("y"), nm.fresh("y"));
    let args = |last: &str| -> Vec<Term> { xs.iter().map(|x| v(x)).chain([v(last)]).collect() };
    let forall_xs = |body: Arith| {
        xs.iter().rev().fold(body, |acc, x| Arith::forall(x.clone(), ArithType::First, acc))
    };
    let total = forall_xs(Arith::exists(y.clone(), ArithType::First, Arith::holds(g, args(&y))));
    let unique = forall_xs(Arith::forall(
        y.clone(),
        ArithType::First,
        Arith::forall(
            y2.clone(),
            ArithType::First,
            Arith::holds(g, args(&y))
                .and(Arith::holds(g, args(&y2)))
                .implies(Arith::eq(v(&y), v(&y2))),
        ),
    ));
    total.and(unique)
}

/// Step one: every quantified function `f` of arity `k` becomes a relation of
/// arity `k+1` constrained to be a function graph.
pub fn eliminate_functions(f: &Arith) -> Arith {
    let mut nm = Namer::new(f);
    elim_fn(f, &mut nm)
}

fn elim_fn(f: &Arith, nm: &mut Namer) -> Arith {
    match f {
        Arith::Quant(q, x, ArithType::Function(k), b) => {
            let body = elim_fn(b, nm);
            let ax = functionality(x, *k, nm);
            let inner = match q {
                Quant::Exists => ax.and(body),
                Quant::Forall => ax.implies(body),
            };
            Arith::Quant(*q, x.clone(), ArithType::Second(k + 1), Box::new(inner))
        }
        Arith::Quant(q, x, t, b) => Arith::Quant(*q, x.clone(), t.clone(), Box::new(elim_fn(b, nm))),
        Arith::Not(a) => elim_fn(a, nm).not(),
        Arith::And(a, b) => {
            let a = elim_fn(a, nm);
            a.and(elim_fn(b, nm))
        }
        Arith::Or(a, b) => {
            let a = elim_fn(a, nm);
            a.or(elim_fn(b, nm))
        }
        Arith::Implies(a, b) => {
            let a = elim_fn(a, nm);
            a.implies(elim_fn(b, nm))
        }
        Arith::Iff(a, b) => {
            let a = elim_fn(a, nm);
            a.iff(elim_fn(b, nm))
        }
        _ => unfold_calls(f, nm),
    }
}

// ---------------------------------------------------------------- relations

/// `ψ_2(t_1, t_2, t)`: `2̲×t = (t_1+t_2)×(t_1+t_2) + 3̲×t_1 + t_2`, the graph of the Cantor pairing.
pub fn psi2(t1: Term, t2: Term, t: Term) -> Arith {
    let s = t1.clone().plus(t2.clone());
    Arith::eq(
        numeral(2).times(t),
        s.clone().times(s).plus(numeral(3).times(t1)).plus(t2),
    )
}

/// `ψ_ℓ(t_1..t_ℓ, t)`, chaining `ψ_2` through fresh first-order variables.
pub fn psi_tuple(args: &[Term], t: Term, used: &mut BTreeSet<String>) -> Arith {
    let mut nm = Namer {
        used: std::mem::take(used),
    };
    let out = psi_in(args, t, &mut nm);
    *used = nm.used;
    out
}

fn psi_in(args: &[Term], t: Term, nm: &mut Namer) -> Arith {
    match args.len() {
        0 => Arith::False,
        1 => Arith::eq(args[0].clone(), t),
        2 => psi2(args[0].clone(), args[1].clone(), t),
        n => {
            let z = nm.fresh("z");
            Arith::exists(
                z.clone(),
                ArithType::First,
                psi_in(&args[..n - 1], v(&z), nm).and(psi2(v(&z), args[n - 1].clone(), t)),
            )
        }
    }
}

/// Step two: make every second-order variable unary via the tuple pairing.
pub fn unary_relations(f: &Arith) -> Arith {
    let mut nm = Namer::new(f);
    let g = map_atoms(f, &mut |a| match a {
        Arith::Holds(r, args) if args.len() >= 2 || !args[0].is_var() => {
            let x = nm.fresh("x");
            Arith::exists(
                x.clone(),
                ArithType::First,
                psi_in(args, v(&x), &mut nm).and(Arith::holds(r.clone(), vec![v(&x)])),
            )
        }
        _ => a.clone(),
    });
    map_types(&g, &|t| match t {
        ArithType::Second(_) => ArithType::Second(1),
        ArithType::Third(ns) => ArithType::Third(vec![1; ns.len()]),
        t => t.clone(),
    })
}

// ---------------------------------------------------------------- families

/// `θ_k(A_1..A_k, B)`: `∀m(B(m) ↔ ∃n ⋁_i (A_i(n) ∧ m = k̲×n + (i−1)̲))`.
pub fn theta(sets: &[String], b: &str, used: &mut BTreeSet<String>) -> Arith {
    let mut nm = Namer {
        used: std::mem::take(used),
    };
    let out = theta_in(sets, b, &mut nm);
    *used = nm.used;
    out
}

fn theta_in(sets: &[String], b: &str, nm: &mut Namer) -> Arith {
    let (m, n) = (nm.fresh("m"), nm.fresh("n"));
    let k = sets.len() as u64;
    let cases = sets.iter().enumerate().map(|(i, a)| {
        let kn = numeral(k).times(v(&n));
        let rhs = if i == 0 { kn } else { kn.plus(numeral(i as u64)) };
        Arith::holds(a.clone(), vec![v(&n)]).and(Arith::eq(v(&m), rhs))
    });
    Arith::forall(
        m.clone(),
        ArithType::First,
        Arith::holds(b, vec![v(&m)]).iff(Arith::exists(n.clone(), ArithType::First, or_all(cases))),
    )
}

/// Step three: make every third-order variable range over sets of unary sets.
pub fn unary_families(f: &Arith) -> Arith {
    let mut nm = Namer::new(f);
    let g = map_atoms(f, &mut |a| match a {
        Arith::Member(fam, sets) if sets.len() >= 2 => {
            let b = nm.fresh("B");
            Arith::exists(
                b.clone(),
                ArithType::Second(1),
                theta_in(sets, &b, &mut nm).and(Arith::member(fam.clone(), vec![b])),
            )
        }
        _ => a.clone(),
    });
    map_types(&g, &|t| match t {
        ArithType::Third(_) => ArithType::Third(vec![1]),
        t => t.clone(),
    })
}

// ---------------------------------------------------------------- built-ins

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Builtin {
    Zero,
    Eq,
    One,
    Plus,
    Times,
}

struct Defs {
    names: BTreeMap<Builtin, String>,
    needed: BTreeSet<Builtin>,
}

impl Defs {
    fn need(&mut self, b: Builtin) -> String {
        self.needed.insert(b);
        self.names[&b].clone()
    }
}

fn flatten(t: &Term, cons: &mut Vec<Arith>, vars: &mut Vec<String>, d: &mut Defs, nm: &mut Namer) -> String {
    match t {
        Term::Var(x) => x.clone(),
        Term::Zero | Term::One => {
            let rel = d.need(if *t == Term::Zero { Builtin::Zero } else { Builtin::One });
            let r = nm.fresh("u");
            cons.push(Arith::holds(rel, vec![v(&r)]));
            vars.push(r.clone());
            r
        }
        Term::Plus(a, b) | Term::Times(a, b) => {
            let x = flatten(a, cons, vars, d, nm);
            let y = flatten(b, cons, vars, d, nm);
            let kind = if matches!(t, Term::Plus(..)) { Builtin::Plus } else { Builtin::Times };
            let rel = d.need(kind);
            let r = nm.fresh("u");
            cons.push(Arith::holds(rel, vec![v(&x), v(&y), v(&r)]));
            vars.push(r.clone());
            r
        }
        Term::Call(..) => unreachable!("functions are eliminated first"),
    }
}

/// `S(a, b)`: `b` is the successor of `a`.
fn succ(a: &str, b: &str, nm: &mut Namer) -> Arith {
    let w = nm.fresh("w");
    Arith::lt(v(a), v(b)).and(Arith::forall(
        w.clone(),
        ArithType::First,
        Arith::lt(v(a), v(&w)).and(Arith::lt(v(&w), v(b))).not(),
    ))
}

fn definition(b: Builtin, d: &Defs, nm: &mut Namer) -> Arith {
    let n = |k: Builtin| d.names[&k].clone();
    let h = |r: String, args: &[&str]| Arith::holds(r, args.iter().map(|a| v(a)).collect());
    let fo = ArithType::First;
    match b {
        Builtin::Zero => {
            let (x, y) = (nm.fresh("x"), nm.fresh("y"));
            Arith::forall(
                x.clone(),
                fo.clone(),
                h(n(b), &[&x]).iff(Arith::forall(y.clone(), fo, Arith::lt(v(&y), v(&x)).not())),
            )
        }
        Builtin::Eq => {
            let (x, y) = (nm.fresh("x"), nm.fresh("y"));
            Arith::forall(
                x.clone(),
                fo.clone(),
                Arith::forall(
                    y.clone(),
                    fo,
                    h(n(b), &[&x, &y])
                        .iff(Arith::lt(v(&x), v(&y)).not().and(Arith::lt(v(&y), v(&x)).not())),
                ),
            )
        }
        Builtin::One => {
            let (x, z) = (nm.fresh("x"), nm.fresh("z"));
            let s = succ(&z, &x, nm);
            Arith::forall(
                x.clone(),
                fo.clone(),
                h(n(b), &[&x]).iff(Arith::exists(z.clone(), fo, h(n(Builtin::Zero), &[&z]).and(s))),
            )
        }
        Builtin::Plus | Builtin::Times => {
            let (x, y, z) = (nm.fresh("x"), nm.fresh("y"), nm.fresh("z"));
            let (y0, z0) = (nm.fresh("y"), nm.fresh("z"));
            let zero = n(Builtin::Zero);
            let base = if b == Builtin::Plus {
                h(zero.clone(), &[&y]).and(h(n(Builtin::Eq), &[&z, &x]))
            } else {
                h(zero.clone(), &[&y]).and(h(zero, &[&z]))
            };
            let step = if b == Builtin::Plus {
                let s1 = succ(&y0, &y, nm);
                let s2 = succ(&z0, &z, nm);
                s1.and(s2).and(h(n(b), &[&x, &y0, &z0]))
            } else {
                let s1 = succ(&y0, &y, nm);
                s1.and(h(n(b), &[&x, &y0, &z0])).and(h(n(Builtin::Plus), &[&z0, &x, &z]))
            };
            let rec = Arith::exists(y0.clone(), fo.clone(), Arith::exists(z0.clone(), fo.clone(), step));
            [z.clone(), y.clone(), x.clone()].into_iter().fold(
                h(n(b), &[&x, &y, &z]).iff(base.or(rec)),
                |acc, q| Arith::forall(q, fo.clone(), acc),
            )
        }
    }
}

/// Step four: replace `0, 1, +, ×, =, ≤` by existentially quantified
/// relations whose defining axioms mention only `<`.
pub fn eliminate_builtins(f: &Arith) -> Arith {
    let mut nm = Namer::new(f);
    let names = [
        (Builtin::Zero, "Zero"),
        (Builtin::Eq, "Eq"),
        (Builtin::One, "One"),
        (Builtin::Plus, "Plus"),
        (Builtin::Times, "Times"),
    ]
    .into_iter()
    .map(|(b, s)| (b, nm.fresh(s)))
    .collect();
    let mut d = Defs {
        names,
        needed: BTreeSet::new(),
    };
    let body = map_atoms(f, &mut |a| {
        let mut cons = vec![];
        let mut vars = vec![];
        let mut flat = |t: &Term, cons: &mut Vec<Arith>, vars: &mut Vec<String>| {
            flatten(t, cons, vars, &mut d, &mut nm)
        };
        let core = match a {
            Arith::Lt(x, y) => {
                let (x, y) = (flat(x, &mut cons, &mut vars), flat(y, &mut cons, &mut vars));
                Arith::lt(v(&x), v(&y))
            }
            Arith::Eq(x, y) => {
                let (x, y) = (flat(x, &mut cons, &mut vars), flat(y, &mut cons, &mut vars));
                Arith::holds(d.need(Builtin::Eq), vec![v(&x), v(&y)])
            }
            Arith::Le(x, y) => {
                let (x, y) = (flat(x, &mut cons, &mut vars), flat(y, &mut cons, &mut vars));
                Arith::lt(v(&x), v(&y)).or(Arith::holds(d.need(Builtin::Eq), vec![v(&x), v(&y)]))
            }
            Arith::Holds(r, args) => {
                let xs: Vec<Term> = args.iter().map(|t| v(&flat(t, &mut cons, &mut vars))).collect();
                Arith::holds(r.clone(), xs)
            }
            _ => a.clone(),
        };
        let body = and_all(cons.into_iter().chain([core]));
        vars.into_iter()
            .rev()
            .fold(body, |acc, x| Arith::exists(x, ArithType::First, acc))
    });
    // close the dependency set
    let mut needed = d.needed.clone();
    if needed.contains(&Builtin::Times) {
        needed.insert(Builtin::Plus);
    }
    if needed.contains(&Builtin::Plus) {
        needed.insert(Builtin::Eq);
    }
    if !needed.is_empty() && needed != BTreeSet::from([Builtin::Eq]) {
        needed.insert(Builtin::Zero);
    }
    let defs: Vec<Arith> = needed.iter().map(|&b| definition(b, &d, &mut nm)).collect();
    let arity = |b: Builtin| match b {
        Builtin::Zero | Builtin::One => 1,
        Builtin::Eq => 2,
        Builtin::Plus | Builtin::Times => 3,
    };
    needed.iter().rev().fold(and_all(defs.into_iter().chain([body])), |acc, &b| {
        Arith::exists(d.names[&b].clone(), ArithType::Second(arity(b)), acc)
    })
}

// ---------------------------------------------------------------- pipeline

/// Check the normal-form shape: a closed prenex sentence with distinct
/// binders over types `1`, `(2 ℓ)` with `ℓ ≤ 3` and `(3 1)`, whose atoms are
/// `𝔞(A)`, `A(x̄)` over first-order variables, `x < y`, `⊤` or `⊥`.
pub fn shape_check(f: &Arith) -> Result<(), ArithError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(ArithError::NotClosed(free.into_iter().collect()));
    }
    let (prefix, matrix) = f.prefix();
    if !matrix.is_quantifier_free() {
        return Err(ArithError::NotNormalForm("not in prenex form".into()));
    }
    let mut types = BTreeMap::new();
    for (_, x, t) in &prefix {
        match t {
            ArithType::First | ArithType::Second(1..=3) => {}
            ArithType::Third(ns) if ns == &[1] => {}
            t => return Err(ArithError::NotNormalForm(format!("`{x}` has type {t}"))),
        }
        if types.insert(x.clone(), t.clone()).is_some() {
            return Err(ArithError::NotNormalForm(format!("`{x}` is bound twice")));
        }
    }
    check_matrix(matrix, &types)
}

fn check_matrix(f: &Arith, types: &BTreeMap<String, ArithType>) -> Result<(), ArithError> {
    let bad = |what: String| Err(ArithError::NotNormalForm(what));
    let is_fo = |t: &Term| matches!(t, Term::Var(x) if types.get(x) == Some(&ArithType::First));
    match f {
        Arith::True | Arith::False => Ok(()),
        Arith::Lt(a, b) if is_fo(a) && is_fo(b) => Ok(()),
        Arith::Holds(r, args)
            if types.get(r) == Some(&ArithType::Second(args.len())) && args.iter().all(is_fo) =>
        {
            Ok(())
        }
        Arith::Member(a, sets)
            if types.get(a) == Some(&ArithType::Third(vec![1]))
                && sets.len() == 1
                && types.get(&sets[0]) == Some(&ArithType::Second(1)) =>
        {
            Ok(())
        }
        Arith::Not(a) => check_matrix(a, types),
        Arith::And(a, b) | Arith::Or(a, b) | Arith::Implies(a, b) | Arith::Iff(a, b) => {
            check_matrix(a, types)?;
            check_matrix(b, types)
        }
        other => bad(format!("atom {other} is not allowed")),
    }
}

/// Run the whole pipeline on a closed sentence; inputs already in normal form
/// are returned unchanged.
pub fn normalize_arity(f: &Arith) -> Result<Arith, ArithError> {
    if shape_check(f).is_ok() {
        return Ok(f.clone());
    }
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(ArithError::NotClosed(free.into_iter().collect()));
    }
    f.check_sorts(&BTreeMap::new())?;
    let g = prenex(f);
    debug_assert!(is_prenex(&g));
    let g = eliminate_functions(&g);
    let g = unary_relations(&g);
    let g = unary_families(&g);
    let g = eliminate_builtins(&g);
    let out = prenex(&g);
    shape_check(&out)?;
    Ok(out)
}

/// A random closed sentence over all sorts, for property tests.
pub fn random_sentence<R: Rng>(rng: &mut R, size: usize) -> Arith {
    let mut scope: Vec<(String, ArithType)> = vec![];
    let mut prefix = vec![];
    let nq = rng.gen_range(1..=3);
    for i in 0..nq {
        let t = match rng.gen_range(0..5) {
            0 | 1 => ArithType::First,
            2 => ArithType::Second(rng.gen_range(1..=3)),
            3 => ArithType::Function(rng.gen_range(1..=2)),
            _ => ArithType::Third(vec![1, 2][..rng.gen_range(1..=2)].to_vec()),
        };
        let q = if rng.gen_bool(0.5) { Quant::Exists } else { Quant::Forall };
        let name = format!("v{i}");
        prefix.push((q, name.clone(), t.clone()));
        scope.push((name, t));
    }
    // every type needs its dependencies in scope
    scope.push(("c".into(), ArithType::First));
    prefix.push((Quant::Exists, "c".into(), ArithType::First));
    for (i, n) in [1usize, 2].iter().enumerate() {
        let name = format!("r{i}");
        scope.push((name.clone(), ArithType::Second(*n)));
        prefix.push((Quant::Forall, name, ArithType::Second(*n)));
    }
    let body = random_body(rng, &scope, size);
    Arith::with_prefix(&prefix, body)
}

fn random_term<R: Rng>(rng: &mut R, scope: &[(String, ArithType)], depth: usize) -> Term {
    let fo: Vec<&String> = scope.iter().filter(|(_, t)| *t == ArithType::First).map(|(n, _)| n).collect();
    let fns: Vec<(&String, usize)> = scope
        .iter()
        .filter_map(|(n, t)| match t {
            ArithType::Function(k) => Some((n, *k)),
            _ => None,
        })
        .collect();
    match if depth == 0 { rng.gen_range(0..3) } else { rng.gen_range(0..6) } {
        0 | 1 => Term::var(fo[rng.gen_range(0..fo.len())].clone()),
        2 => numeral(rng.gen_range(0..3)),
        3 => random_term(rng, scope, depth - 1).plus(random_term(rng, scope, depth - 1)),
        4 => random_term(rng, scope, depth - 1).times(random_term(rng, scope, depth - 1)),
        _ if !fns.is_empty() => {
            let (f, k) = fns[rng.gen_range(0..fns.len())];
            Term::Call(f.clone(), (0..k).map(|_| random_term(rng, scope, depth - 1)).collect())
        }
        _ => Term::var(fo[0].clone()),
    }
}

fn random_body<R: Rng>(rng: &mut R, scope: &[(String, ArithType)], size: usize) -> Arith {
    if size <= 1 {
        let rels: Vec<(&String, usize)> = scope
            .iter()
            .filter_map(|(n, t)| match t {
                ArithType::Second(k) => Some((n, *k)),
                _ => None,
            })
            .collect();
        let fams: Vec<(&String, &Vec<usize>)> = scope
            .iter()
            .filter_map(|(n, t)| match t {
                ArithType::Third(ns) => Some((n, ns)),
                _ => None,
            })
            .collect();
        return match rng.gen_range(0..6) {
            0 => Arith::lt(random_term(rng, scope, 1), random_term(rng, scope, 1)),
            1 => Arith::eq(random_term(rng, scope, 1), random_term(rng, scope, 1)),
            2 => Arith::le(random_term(rng, scope, 1), random_term(rng, scope, 1)),
            3 if !fams.is_empty() => {
                let (a, ns) = fams[rng.gen_range(0..fams.len())];
                let args = ns
                    .iter()
                    .map(|k| {
                        let cands: Vec<&&String> = rels.iter().filter(|(_, n)| n == k).map(|(n, _)| n).collect();
                        (**cands[rng.gen_range(0..cands.len())]).clone()
                    })
                    .collect();
                Arith::member(a.clone(), args)
            }
            _ => {
                let (r, k) = rels[rng.gen_range(0..rels.len())];
                Arith::holds(r.clone(), (0..k).map(|_| random_term(rng, scope, 1)).collect())
            }
        };
    }
    let l = rng.gen_range(1..size);
    match rng.gen_range(0..5) {
        0 => random_body(rng, scope, size - 1).not(),
        1 => random_body(rng, scope, l).and(random_body(rng, scope, size - l)),
        2 => random_body(rng, scope, l).or(random_body(rng, scope, size - l)),
        3 => random_body(rng, scope, l).implies(random_body(rng, scope, size - l)),
        _ => random_body(rng, scope, l).iff(random_body(rng, scope, size - l)),
    }
}
