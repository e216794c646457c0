//! Classical LTL on a single lasso, kept independent of the team evaluator.

use super::EvalError;
use crate::formula::Formula;
use crate::trace::{Alphabet, LassoTrace};

/// `t ⊨ φ` for pure LTL `φ`, computed as truth vectors over `|prefix|+|loop|` positions.
pub fn check_classical(
    alphabet: &Alphabet,
    t: &LassoTrace,
    f: &Formula,
) -> Result<bool, EvalError> {
    let n = t.span();
    let succ = |c: usize| if c + 1 < n { c + 1 } else { t.prefix().len() };
    Ok(vector(alphabet, t, f, n, &succ)?[0])
}

fn vector(
    alphabet: &Alphabet,
    t: &LassoTrace,
    f: &Formula,
    n: usize,
    succ: &dyn Fn(usize) -> usize,
) -> Result<Vec<bool>, EvalError> {
    use Formula as F;
    let rec = |g: &Formula| vector(alphabet, t, g, n, succ);
    // positions c, succ(c), … visiting every reachable position once
    let walk = |c: usize| {
        let mut out = Vec::with_capacity(n);
        let mut x = c;
        for _ in 0..n {
            out.push(x);
            x = succ(x);
        }
        out
    };
    Ok(match f {
        F::Top => vec![true; n],
        F::Bot => vec![false; n],
        F::Prop(p) => {
            let i = alphabet
                .index_of(p)
                .ok_or_else(|| EvalError::UnknownProposition(p.clone()))?;
            (0..n).map(|c| t.at(c).contains(i)).collect()
        }
        F::Neg(a) => rec(a)?.into_iter().map(|b| !b).collect(),
        F::And(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            x.iter().zip(&y).map(|(a, b)| *a && *b).collect()
        }
        F::SplitOr(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            x.iter().zip(&y).map(|(a, b)| *a || *b).collect()
        }
        F::Next(a) => {
            let x = rec(a)?;
            (0..n).map(|c| x[succ(c)]).collect()
        }
        F::Future(a) => {
            let x = rec(a)?;
            (0..n).map(|c| walk(c).iter().any(|&k| x[k])).collect()
        }
        F::Globally(a) => {
            let x = rec(a)?;
            (0..n).map(|c| walk(c).iter().all(|&k| x[k])).collect()
        }
        F::Until(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            (0..n)
                .map(|c| {
                    for k in walk(c) {
                        if y[k] {
                            return true;
                        }
                        if !x[k] {
                            return false;
                        }
                    }
                    false
                })
                .collect()
        }
        F::Release(a, b) => {
            let (x, y) = (rec(a)?, rec(b)?);
            (0..n)
                .map(|c| {
                    for k in walk(c) {
                        if !y[k] {
                            return false;
                        }
                        if x[k] {
                            return true;
                        }
                    }
                    true
                })
                .collect()
        }
        other => {
            return Err(EvalError::NonClassicalFormula(crate::formula::print(other)));
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::trace::Label;

    #[test]
    fn examples() {
        let a = Alphabet::new(["p"]).unwrap();
        let p = Label::singleton(0);
        let e = Label::EMPTY;
        let run = |t: &LassoTrace, s: &str| check_classical(&a, t, &parse(s).unwrap()).unwrap();
        assert!(run(&LassoTrace::new(vec![p], vec![e]).unwrap(), "F p"));
        assert!(run(&LassoTrace::constant(e), "G !p"));
        assert!(run(&LassoTrace::new(vec![], vec![p, e]).unwrap(), "G F p"));
        assert!(!run(&LassoTrace::new(vec![], vec![p, e]).unwrap(), "F G p"));
        assert!(matches!(
            check_classical(&a, &LassoTrace::constant(e), &parse("~p").unwrap()),
            Err(EvalError::NonClassicalFormula(_))
        ));
    }
}
