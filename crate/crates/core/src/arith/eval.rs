//! Bounded evaluation of arithmetic formulas.
//!
//! First-order quantifiers range over `[0, fo_bound)` and second-order ones
//! over relations on `[0, so_bound)`. This is a relativization, not the
//! standard semantics: it is only sound for sentences whose witnesses lie
//! inside the bounds, which is how the tests use it. Third-order
//! quantification is refused.

use std::collections::{BTreeMap, BTreeSet};

use super::{Arith, ArithError, ArithType, Quant, Term};

/// Quantifier nesting accepted by the evaluator.
pub const MAX_QUANTIFIERS: usize = 6;
/// Largest number of candidate tuples a second-order quantifier may range over.
pub const MAX_TUPLES: usize = 16;

pub type Relation = BTreeSet<Vec<u64>>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Num(u64),
    Rel(Relation),
    /// Tuples `(A_1..A_k)` in a third-order family.
    Family(BTreeSet<Vec<Relation>>),
    Fn(BTreeMap<Vec<u64>, u64>),
}

pub type Env = BTreeMap<String, Value>;

struct Ctx<'a> {
    base: &'a Env,
    stack: Vec<(String, Value)>,
    fo: u64,
    so: u64,
}

impl Ctx<'_> {
    fn get(&self, name: &str) -> Result<&Value, ArithError> {
        self.stack
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
            .or_else(|| self.base.get(name))
            .ok_or_else(|| ArithError::Unbound(name.into()))
    }

    fn num(&self, name: &str) -> Result<u64, ArithError> {
        match self.get(name)? {
            Value::Num(n) => Ok(*n),
            _ => Err(ArithError::Unbound(format!("`{name}` is not a number"))),
        }
    }

    fn rel(&self, name: &str) -> Result<&Relation, ArithError> {
        match self.get(name)? {
            Value::Rel(r) => Ok(r),
            _ => Err(ArithError::Unbound(format!("`{name}` is not a relation"))),
        }
    }

    fn term(&self, t: &Term) -> Result<u64, ArithError> {
        Ok(match t {
            Term::Var(x) => self.num(x)?,
            Term::Zero => 0,
            Term::One => 1,
            Term::Plus(a, b) => self.term(a)?.checked_add(self.term(b)?).ok_or(ArithError::Overflow)?,
            Term::Times(a, b) => self.term(a)?.checked_mul(self.term(b)?).ok_or(ArithError::Overflow)?,
            Term::Call(f, args) => {
                let xs = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                match self.get(f)? {
                    Value::Fn(m) => *m.get(&xs).ok_or_else(|| {
                        ArithError::CapExceeded(format!("`{f}` applied outside its bounded domain"))
                    })?,
                    _ => return Err(ArithError::Unbound(format!("`{f}` is not a function"))),
                }
            }
        })
    }

    fn eval(&mut self, f: &Arith) -> Result<bool, ArithError> {
        Ok(match f {
            Arith::True => true,
            Arith::False => false,
            Arith::Eq(a, b) => self.term(a)? == self.term(b)?,
            Arith::Lt(a, b) => self.term(a)? < self.term(b)?,
            Arith::Le(a, b) => self.term(a)? <= self.term(b)?,
            Arith::Holds(r, args) => {
                let xs = args.iter().map(|a| self.term(a)).collect::<Result<Vec<_>, _>>()?;
                self.rel(r)?.contains(&xs)
            }
            Arith::Member(a, sets) => {
                let rs = sets.iter().map(|s| self.rel(s).cloned()).collect::<Result<Vec<_>, _>>()?;
                match self.get(a)? {
                    Value::Family(fam) => fam.contains(&rs),
                    _ => return Err(ArithError::Unbound(format!("`{a}` is not a family"))),
                }
            }
            Arith::Not(a) => !self.eval(a)?,
            Arith::And(a, b) => self.eval(a)? && self.eval(b)?,
            Arith::Or(a, b) => self.eval(a)? || self.eval(b)?,
            Arith::Implies(a, b) => !self.eval(a)? || self.eval(b)?,
            Arith::Iff(a, b) => self.eval(a)? == self.eval(b)?,
            Arith::Quant(q, x, t, body) => {
                let want = *q == Quant::Exists;
                for val in self.domain(t)? {
                    self.stack.push((x.clone(), val));
                    let r = self.eval(body);
                    self.stack.pop();
                    if r? == want {
                        return Ok(want);
                    }
                }
                !want
            }
        })
    }

    fn domain(&self, t: &ArithType) -> Result<Vec<Value>, ArithError> {
        match t {
            ArithType::First => Ok((0..self.fo).map(Value::Num).collect()),
            ArithType::Second(n) => {
                let tuples = tuples(self.so, *n)?;
                Ok(subsets(&tuples).into_iter().map(Value::Rel).collect())
            }
            ArithType::Function(k) => {
                let args = tuples(self.fo, *k)?;
                let count = (self.fo as f64).powi(args.len() as i32);
                if count > (1u64 << MAX_TUPLES) as f64 {
                    return Err(ArithError::CapExceeded(format!("{count} functions of arity {k}")));
                }
                let mut out = vec![BTreeMap::new()];
                for a in &args {
                    out = out
                        .into_iter()
                        .flat_map(|m| {
                            (0..self.fo).map(move |y| {
                                let mut m = m.clone();
                                m.insert(a.clone(), y);
                                m
                            })
                        })
                        .collect();
                }
                Ok(out.into_iter().map(Value::Fn).collect())
            }
            ArithType::Third(_) => Err(ArithError::ThirdOrderUnsupported),
        }
    }
}

fn tuples(bound: u64, arity: usize) -> Result<Vec<Vec<u64>>, ArithError> {
    let count = (bound as f64).powi(arity as i32);
    if count > MAX_TUPLES as f64 {
        return Err(ArithError::CapExceeded(format!(
            "{count} tuples of arity {arity} exceed the cap of {MAX_TUPLES}"
        )));
    }
    let mut out = vec![vec![]];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t: Vec<u64>| {
                (0..bound).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    Ok(out)
}

fn subsets(items: &[Vec<u64>]) -> Vec<Relation> {
    (0u64..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, t)| t.clone())
                .collect()
        })
        .collect()
}

/// Evaluate a sentence under the bounded relativization.
pub fn bounded_eval(f: &Arith, fo_bound: u64, so_bound: u64) -> Result<bool, ArithError> {
    bounded_eval_env(f, &Env::new(), fo_bound, so_bound)
}

/// Evaluate with free variables taken from `env`.
pub fn bounded_eval_env(f: &Arith, env: &Env, fo_bound: u64, so_bound: u64) -> Result<bool, ArithError> {
    let q = f.quantifier_count();
    if q > MAX_QUANTIFIERS {
        return Err(ArithError::CapExceeded(format!(
            "{q} quantifiers (at most {MAX_QUANTIFIERS})"
        )));
    }
    let mut ctx = Ctx {
        base: env,
        stack: vec![],
        fo: fo_bound,
        so: so_bound,
    };
    ctx.eval(f)
}

/// A unary relation from a set of numbers.
pub fn unary(set: impl IntoIterator<Item = u64>) -> Value {
    Value::Rel(set.into_iter().map(|x| vec![x]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::normal::psi2;
    use crate::arith::{cantor_pair, parse_arith};

    #[test]
    fn small_sentences() {
        let f = parse_arith("(exists (x 1) (exists (y 1) (lt x y)))").unwrap();
        assert!(bounded_eval(&f, 3, 2).unwrap());
        let f = parse_arith("(exists (x 1) (lt x x))").unwrap();
        assert!(!bounded_eval(&f, 3, 2).unwrap());
        let f = parse_arith("(exists (A (2 1)) (forall (x 1) (not (holds A x))))").unwrap();
        assert!(bounded_eval(&f, 3, 3).unwrap());
    }

    #[test]
    fn psi2_is_the_pairing_graph() {
        let f = psi2(Term::var("a"), Term::var("b"), Term::var("t"));
        for a in 0..4 {
            for b in 0..4 {
                for t in 0..30 {
                    let env: Env = [("a", a), ("b", b), ("t", t)]
                        .into_iter()
                        .map(|(k, v)| (k.to_string(), Value::Num(v)))
                        .collect();
                    let want = cantor_pair(a, b).unwrap() == t;
                    assert_eq!(bounded_eval_env(&f, &env, 8, 1).unwrap(), want);
                }
            }
        }
    }

    #[test]
    fn caps() {
        let f = parse_arith("(exists (a (3 1)) (true))").unwrap();
        assert_eq!(bounded_eval(&f, 2, 2), Err(ArithError::ThirdOrderUnsupported));
        let f = parse_arith("(exists (A (2 3)) (true))").unwrap();
        assert!(matches!(bounded_eval(&f, 2, 4), Err(ArithError::CapExceeded(_))));
        let f = parse_arith("(lt x (one))").unwrap();
        assert!(matches!(bounded_eval(&f, 2, 2), Err(ArithError::Unbound(_))));
    }
}
