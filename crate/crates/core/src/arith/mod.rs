//! Higher-order arithmetic: syntax, pairing, prenex and bounded-arity
//! normal forms, a bounded evaluator, and the emitters from LTL(~).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

pub mod emit;
pub mod eval;
pub mod normal;
pub mod pairing;
pub mod prenex;
pub mod sexpr;

pub use emit::{
    emit_rho2, emit_rho2_finsat_ulp, emit_rho2_mc_ulp, emit_rho2_sat, emit_rho2_sat_ulc,
    emit_rho2_sat_ulp, emit_rho3, emit_rho3_finsat, emit_rho3_mc, emit_rho3_sat, prop_numbering,
    to_core,
};
pub use eval::{bounded_eval, bounded_eval_env, Env, Value};
pub use normal::{normalize_arity, shape_check};
pub use pairing::{cantor_pair, cantor_tuple, cantor_untuple, cantor_unpair, set_pair, set_unpair};
pub use prenex::prenex;
pub use sexpr::{parse_arith, print_arith, PrintOptions};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("s-expression error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("variable `{name}` used as {used} but declared as {declared}")]
    Sort {
        name: String,
        used: String,
        declared: String,
    },
    #[error("formula is not closed; free variables: {0:?}")]
    NotClosed(Vec<String>),
    #[error("unsupported construct: {0}")]
    Unsupported(String),
    #[error("not in normal form: {0}")]
    NotNormalForm(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("evaluation cap exceeded: {0}")]
    CapExceeded(String),
    #[error("third-order quantification is not supported by the bounded evaluator")]
    ThirdOrderUnsupported,
    #[error("unbound variable `{0}`")]
    Unbound(String),
}

/// Sort of a variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithType {
    First,
    /// Relation of the given arity.
    Second(usize),
    /// Relation over relations, one arity per argument.
    Third(Vec<usize>),
    /// Function of the given arity.
    Function(usize),
}

impl fmt::Display for ArithType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithType::First => write!(f, "first-order"),
            ArithType::Second(n) => write!(f, "second-order/{n}"),
            ArithType::Third(ns) => write!(f, "third-order{ns:?}"),
            ArithType::Function(n) => write!(f, "function/{n}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Plus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
    /// Application of a function variable.
    Call(String, Vec<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quant {
    Exists,
    Forall,
}

impl Quant {
    pub fn dual(self) -> Quant {
        match self {
            Quant::Exists => Quant::Forall,
            Quant::Forall => Quant::Exists,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arith {
    True,
    False,
    Eq(Term, Term),
    Lt(Term, Term),
    Le(Term, Term),
    /// `A(t_1, …, t_ℓ)` for a second-order `A`.
    Holds(String, Vec<Term>),
    /// `𝔞(A_1, …, A_k)` for a third-order `𝔞`.
    Member(String, Vec<String>),
    Not(Box<Arith>),
    And(Box<Arith>, Box<Arith>),
    Or(Box<Arith>, Box<Arith>),
    Implies(Box<Arith>, Box<Arith>),
    Iff(Box<Arith>, Box<Arith>),
    Quant(Quant, String, ArithType, Box<Arith>),
}

/// The numeral `m̲ = 1 + 1 + … + 1`, or `0`.
pub fn numeral(m: u64) -> Term {
    if m == 0 {
        return Term::Zero;
    }
    let mut t = Term::One;
    for _ in 1..m {
        t = t.plus(Term::One);
    }
    t
}

impl Term {
    pub fn var(s: impl Into<String>) -> Term {
        Term::Var(s.into())
    }
    pub fn plus(self, o: Term) -> Term {
        Term::Plus(Box::new(self), Box::new(o))
    }
    pub fn times(self, o: Term) -> Term {
        Term::Times(Box::new(self), Box::new(o))
    }

    /// If this is a numeral `1+…+1` (left-nested) or `0`, its value.
    pub fn as_numeral(&self) -> Option<u64> {
        match self {
            Term::Zero => Some(0),
            Term::One => Some(1),
            Term::Plus(a, b) if **b == Term::One => a.as_numeral().filter(|&n| n >= 1).map(|n| n + 1),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    fn collect_vars(&self, out: &mut Vec<(String, ArithType)>) {
        match self {
            Term::Var(v) => out.push((v.clone(), ArithType::First)),
            Term::Zero | Term::One => {}
            Term::Plus(a, b) | Term::Times(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Call(f, args) => {
                out.push((f.clone(), ArithType::Function(args.len())));
                for a in args {
                    a.collect_vars(out);
                }
            }
        }
    }

    pub fn has_call(&self) -> bool {
        match self {
            Term::Call(..) => true,
            Term::Plus(a, b) | Term::Times(a, b) => a.has_call() || b.has_call(),
            _ => false,
        }
    }

    /// Rename free first-order/function occurrences.
    pub fn rename(&self, from: &str, to: &str) -> Term {
        match self {
            Term::Var(v) if v == from => Term::Var(to.into()),
            Term::Var(_) | Term::Zero | Term::One => self.clone(),
            Term::Plus(a, b) => a.rename(from, to).plus(b.rename(from, to)),
            Term::Times(a, b) => a.rename(from, to).times(b.rename(from, to)),
            Term::Call(f, args) => Term::Call(
                if f == from { to.into() } else { f.clone() },
                args.iter().map(|a| a.rename(from, to)).collect(),
            ),
        }
    }
}

impl Arith {
    pub fn not(self) -> Arith {
        Arith::Not(Box::new(self))
    }
    pub fn and(self, o: Arith) -> Arith {
        Arith::And(Box::new(self), Box::new(o))
    }
    pub fn or(self, o: Arith) -> Arith {
        Arith::Or(Box::new(self), Box::new(o))
    }
    pub fn implies(self, o: Arith) -> Arith {
        Arith::Implies(Box::new(self), Box::new(o))
    }
    pub fn iff(self, o: Arith) -> Arith {
        Arith::Iff(Box::new(self), Box::new(o))
    }
    pub fn exists(name: impl Into<String>, ty: ArithType, body: Arith) -> Arith {
        Arith::Quant(Quant::Exists, name.into(), ty, Box::new(body))
    }
    pub fn forall(name: impl Into<String>, ty: ArithType, body: Arith) -> Arith {
        Arith::Quant(Quant::Forall, name.into(), ty, Box::new(body))
    }
    pub fn holds(name: impl Into<String>, args: Vec<Term>) -> Arith {
        Arith::Holds(name.into(), args)
    }
    pub fn member(name: impl Into<String>, args: Vec<String>) -> Arith {
        Arith::Member(name.into(), args)
    }
    pub fn eq(a: Term, b: Term) -> Arith {
        Arith::Eq(a, b)
    }
    pub fn lt(a: Term, b: Term) -> Arith {
        Arith::Lt(a, b)
    }
    pub fn le(a: Term, b: Term) -> Arith {
        Arith::Le(a, b)
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Arith::Quant(..) => false,
            Arith::Not(a) => a.is_quantifier_free(),
            Arith::And(a, b) | Arith::Or(a, b) | Arith::Implies(a, b) | Arith::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            _ => true,
        }
    }

    /// Number of quantifier nodes.
    pub fn quantifier_count(&self) -> usize {
        match self {
            Arith::Quant(_, _, _, b) => 1 + b.quantifier_count(),
            Arith::Not(a) => a.quantifier_count(),
            Arith::And(a, b) | Arith::Or(a, b) | Arith::Implies(a, b) | Arith::Iff(a, b) => {
                a.quantifier_count() + b.quantifier_count()
            }
            _ => 0,
        }
    }

    /// Split off the quantifier prefix.
    pub fn prefix(&self) -> (Vec<(Quant, String, ArithType)>, &Arith) {
        let mut out = vec![];
        let mut cur = self;
        while let Arith::Quant(q, v, t, b) = cur {
            out.push((*q, v.clone(), t.clone()));
            cur = b;
        }
        (out, cur)
    }

    /// Rebuild from a prefix and a matrix.
    pub fn with_prefix(prefix: &[(Quant, String, ArithType)], matrix: Arith) -> Arith {
        prefix
            .iter()
            .rev()
            .fold(matrix, |acc, (q, v, t)| Arith::Quant(*q, v.clone(), t.clone(), Box::new(acc)))
    }

    /// Variable occurrences with the sort implied by their position, free or bound.
    fn occurrences(&self, out: &mut Vec<(String, ArithType)>) {
        match self {
            Arith::True | Arith::False => {}
            Arith::Eq(a, b) | Arith::Lt(a, b) | Arith::Le(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Arith::Holds(r, args) => {
                out.push((r.clone(), ArithType::Second(args.len())));
                for a in args {
                    a.collect_vars(out);
                }
            }
            Arith::Member(_, _) => {}
            Arith::Not(a) => a.occurrences(out),
            Arith::And(a, b) | Arith::Or(a, b) | Arith::Implies(a, b) | Arith::Iff(a, b) => {
                a.occurrences(out);
                b.occurrences(out);
            }
            Arith::Quant(_, _, _, b) => b.occurrences(out),
        }
    }

    /// Free variables.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.free_into(&mut vec![], &mut out);
        out
    }

    fn free_into(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Arith::Quant(_, v, _, b) => {
                bound.push(v.clone());
                b.free_into(bound, out);
                bound.pop();
            }
            Arith::Member(a, args) => {
                note(a, bound);
                for x in args {
                    note(x, bound);
                }
            }
            Arith::Not(a) => a.free_into(bound, out),
            Arith::And(a, b) | Arith::Or(a, b) | Arith::Implies(a, b) | Arith::Iff(a, b) => {
                a.free_into(bound, out);
                b.free_into(bound, out);
            }
            _ => {
                let mut occ = vec![];
                self.occurrences(&mut occ);
                for (v, _) in occ {
                    note(&v, bound);
                }
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// All variable names, free or bound.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = self.free_vars();
        self.bound_into(&mut out);
        out
    }

    fn bound_into(&self, out: &mut BTreeSet<String>) {
        match self {
            Arith::Quant(_, v, _, b) => {
                out.insert(v.clone());
                b.bound_into(out);
            }
            Arith::Not(a) => a.bound_into(out),
            Arith::And(a, b) | Arith::Or(a, b) | Arith::Implies(a, b) | Arith::Iff(a, b) => {
                a.bound_into(out);
                b.bound_into(out);
            }
            _ => {}
        }
    }

    /// Check that every occurrence agrees with the declared sort.
    ///
    /// `free` declares the free variables; undeclared free variables get the
    /// sort of their first occurrence.
    pub fn check_sorts(&self, free: &BTreeMap<String, ArithType>) -> Result<(), ArithError> {
        let mut env: Vec<(String, ArithType)> =
            free.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        self.sorts_in(&mut env)
    }

    fn sorts_in(&self, env: &mut Vec<(String, ArithType)>) -> Result<(), ArithError> {
        let check = |env: &mut Vec<(String, ArithType)>, name: &str, used: ArithType| {
            match env.iter().rev().find(|(n, _)| n == name) {
                Some((_, t)) if *t != used => Err(ArithError::Sort {
                    name: name.into(),
                    used: used.to_string(),
                    declared: t.to_string(),
                }),
                Some(_) => Ok(()),
                None => {
                    // implicitly declared free variable
                    env.insert(0, (name.into(), used));
                    Ok(())
                }
            }
        };
        match self {
            Arith::Quant(_, v, t, b) => {
                match t {
                    ArithType::Second(0) | ArithType::Function(0) => {
                        return Err(ArithError::Unsupported(format!("`{v}` has arity 0")))
                    }
                    ArithType::Third(ns) if ns.is_empty() || ns.contains(&0) => {
                        return Err(ArithError::Unsupported(format!("`{v}` has an empty type")))
                    }
                    _ => {}
                }
                env.push((v.clone(), t.clone()));
                let r = b.sorts_in(env);
                env.pop();
                r
            }
            Arith::Member(a, args) => {
                let mut arities = vec![];
                for x in args {
                    match env.iter().rev().find(|(n, _)| n == x) {
                        Some((_, ArithType::Second(n))) => arities.push(*n),
                        Some((_, t)) => {
                            return Err(ArithError::Sort {
                                name: x.clone(),
                                used: "second-order".into(),
                                declared: t.to_string(),
                            })
                        }
                        None => {
                            return Err(ArithError::Unsupported(format!(
                                "cannot infer the arity of `{x}`"
                            )))
                        }
                    }
                }
                check(env, a, ArithType::Third(arities))
            }
            Arith::Not(a) => a.sorts_in(env),
            Arith::And(a, b) | Arith::Or(a, b) | Arith::Implies(a, b) | Arith::Iff(a, b) => {
                a.sorts_in(env)?;
                b.sorts_in(env)
            }
            _ => {
                let mut occ = vec![];
                self.occurrences(&mut occ);
                for (v, t) in occ {
                    check(env, &v, t)?;
                }
                Ok(())
            }
        }
    }

    /// Rename free occurrences of `from` to `to` (capture is the caller's concern).
    pub fn rename_free(&self, from: &str, to: &str) -> Arith {
        let r = |t: &Term| t.rename(from, to);
        let s = |n: &String| if n == from { to.to_string() } else { n.clone() };
        match self {
            Arith::True | Arith::False => self.clone(),
            Arith::Eq(a, b) => Arith::Eq(r(a), r(b)),
            Arith::Lt(a, b) => Arith::Lt(r(a), r(b)),
            Arith::Le(a, b) => Arith::Le(r(a), r(b)),
            Arith::Holds(n, args) => Arith::Holds(s(n), args.iter().map(r).collect()),
            Arith::Member(n, args) => Arith::Member(s(n), args.iter().map(s).collect()),
            Arith::Not(a) => a.rename_free(from, to).not(),
            Arith::And(a, b) => a.rename_free(from, to).and(b.rename_free(from, to)),
            Arith::Or(a, b) => a.rename_free(from, to).or(b.rename_free(from, to)),
            Arith::Implies(a, b) => a.rename_free(from, to).implies(b.rename_free(from, to)),
            Arith::Iff(a, b) => a.rename_free(from, to).iff(b.rename_free(from, to)),
            Arith::Quant(q, v, t, b) => {
                if v == from {
                    self.clone()
                } else {
                    Arith::Quant(*q, v.clone(), t.clone(), Box::new(b.rename_free(from, to)))
                }
            }
        }
    }
}

/// Left-nested conjunction; `True` when empty.
pub fn and_all<I: IntoIterator<Item = Arith>>(it: I) -> Arith {
    it.into_iter().reduce(Arith::and).unwrap_or(Arith::True)
}

/// Left-nested disjunction; `False` when empty.
pub fn or_all<I: IntoIterator<Item = Arith>>(it: I) -> Arith {
    it.into_iter().reduce(Arith::or).unwrap_or(Arith::False)
}

/// A name based on `base` not in `used`, made by appending `'`.
pub fn fresh_name(base: &str, used: &BTreeSet<String>) -> String {
    let mut n = base.to_string();
    while used.contains(&n) {
        n.push('\'');
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numerals() {
        assert_eq!(numeral(0), Term::Zero);
        assert_eq!(numeral(1), Term::One);
        assert_eq!(numeral(3), Term::One.plus(Term::One).plus(Term::One));
        assert_eq!(numeral(5).as_numeral(), Some(5));
        assert_eq!(Term::var("x").plus(Term::One).as_numeral(), None);
    }

    #[test]
    fn free_variables() {
        let f = Arith::exists(
            "x",
            ArithType::First,
            Arith::lt(Term::var("x"), Term::var("y")).and(Arith::member("a", vec!["A".into()])),
        );
        let fv: Vec<_> = f.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["A", "a", "y"]);
    }

    #[test]
    fn sort_errors() {
        let f = Arith::exists(
            "x",
            ArithType::First,
            Arith::holds("x", vec![Term::Zero]),
        );
        assert!(matches!(f.check_sorts(&BTreeMap::new()), Err(ArithError::Sort { .. })));
        let g = Arith::exists(
            "A",
            ArithType::Second(2),
            Arith::holds("A", vec![Term::Zero, Term::One]),
        );
        assert!(g.check_sorts(&BTreeMap::new()).is_ok());
    }
}
