//! Prenex normal form.

use std::collections::BTreeSet;

use super::{fresh_name, Arith, ArithType, Quant};

type Prefix = Vec<(Quant, String, ArithType)>;

/// Eliminate `→` and `↔` around quantifiers, make bound names distinct
/// (and distinct from free names), then pull every quantifier to the front.
pub fn prenex(f: &Arith) -> Arith {
    let f = unfold(f);
    let mut used = f.free_vars();
    let f = rename_bound(&f, &mut used);
    let (prefix, matrix) = pull(&f);
    Arith::with_prefix(&prefix, matrix)
}

fn unfold(f: &Arith) -> Arith {
    match f {
        Arith::Implies(a, b) if !a.is_quantifier_free() || !b.is_quantifier_free() => {
            unfold(a).not().or(unfold(b))
        }
        Arith::Iff(a, b) if !a.is_quantifier_free() || !b.is_quantifier_free() => {
            let (a, b) = (unfold(a), unfold(b));
            a.clone().not().or(b.clone()).and(b.not().or(a))
        }
        Arith::Not(a) => unfold(a).not(),
        Arith::And(a, b) => unfold(a).and(unfold(b)),
        Arith::Or(a, b) => unfold(a).or(unfold(b)),
        Arith::Quant(q, v, t, b) => Arith::Quant(*q, v.clone(), t.clone(), Box::new(unfold(b))),
        _ => f.clone(),
    }
}

/// Give every binder a name not seen so far; `used` grows as names are taken.
pub(crate) fn rename_bound(f: &Arith, used: &mut BTreeSet<String>) -> Arith {
    let mut avoid = used.clone();
    avoid.extend(f.all_names());
    rename_in(f, used, &avoid)
}

// `avoid` keeps fresh names clear of binders that have not been visited yet.
fn rename_in(f: &Arith, used: &mut BTreeSet<String>, avoid: &BTreeSet<String>) -> Arith {
    let rename_bound = |g: &Arith, used: &mut BTreeSet<String>| rename_in(g, used, avoid);
    match f {
        Arith::Quant(q, v, t, b) => {
            let nv = if used.contains(v) {
                let mut all = avoid.clone();
                all.extend(used.iter().cloned());
                fresh_name(v, &all)
            } else {
                v.clone()
            };
            used.insert(nv.clone());
            let body = if &nv == v { (**b).clone() } else { b.rename_free(v, &nv) };
            Arith::Quant(*q, nv, t.clone(), Box::new(rename_bound(&body, used)))
        }
        Arith::Not(a) => rename_bound(a, used).not(),
        Arith::And(a, b) => {
            let a = rename_bound(a, used);
            a.and(rename_bound(b, used))
        }
        Arith::Or(a, b) => {
            let a = rename_bound(a, used);
            a.or(rename_bound(b, used))
        }
        Arith::Implies(a, b) => {
            let a = rename_bound(a, used);
            a.implies(rename_bound(b, used))
        }
        Arith::Iff(a, b) => {
            let a = rename_bound(a, used);
            a.iff(rename_bound(b, used))
        }
        _ => f.clone(),
    }
}

fn pull(f: &Arith) -> (Prefix, Arith) {
    match f {
        Arith::Quant(q, v, t, b) => {
            let (mut p, m) = pull(b);
            p.insert(0, (*q, v.clone(), t.clone()));
            (p, m)
        }
        Arith::Not(a) => {
            let (p, m) = pull(a);
            let p = p.into_iter().map(|(q, v, t)| (q.dual(), v, t)).collect();
            (p, m.not())
        }
        Arith::And(a, b) | Arith::Or(a, b) => {
            let (mut pa, ma) = pull(a);
            let (pb, mb) = pull(b);
            pa.extend(pb);
            let m = if matches!(f, Arith::And(..)) { ma.and(mb) } else { ma.or(mb) };
            (pa, m)
        }
        // only quantifier-free implications remain after `unfold`
        _ => (vec![], f.clone()),
    }
}

pub fn is_prenex(f: &Arith) -> bool {
    f.prefix().1.is_quantifier_free()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_arith;

    #[test]
    fn pulls_and_flips() {
        let f = parse_arith("(and (not (exists (x 1) (lt x y))) (exists (x 1) (eq x y)))").unwrap();
        let p = prenex(&f);
        assert!(is_prenex(&p));
        let (pre, _) = p.prefix();
        assert_eq!(pre.len(), 2);
        assert_eq!(pre[0].0, Quant::Forall);
        assert_eq!(pre[1].0, Quant::Exists);
        assert_ne!(pre[0].1, pre[1].1);
        assert_eq!(p.free_vars(), f.free_vars());
    }

    #[test]
    fn iff_is_unfolded() {
        let f = parse_arith("(iff (exists (x 1) (lt x y)) (true))").unwrap();
        let p = prenex(&f);
        assert!(is_prenex(&p));
        assert_eq!(p.quantifier_count(), 2);
    }
}
