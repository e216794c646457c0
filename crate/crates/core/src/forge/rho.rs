//! Translation of normal-form arithmetic into `LTL_1(∼, F)`.
//!
//! A team over `K^ψ` interprets each variable through the traces carrying
//! its marker. Quantifiers shrink that subteam (to one trace for numbers and
//! sets, to any subteam for tuple relations and families), and atoms compare
//! the positions where digits appear.

use super::gadget::{assemble_k_phi, Layout};
use super::{digit, ForgeError, VarKind, END};
use crate::arith::{normalize_arity, shape_check, Arith, Quant, Term};
use crate::formula::{conj, Formula};
use crate::kripke::Kripke;

fn p(name: &str) -> Formula {
    Formula::prop(name)
}

/// Translate a closed normal-form sentence.
pub fn translate_rho(f: &Arith) -> Result<Formula, ForgeError> {
    shape_check(f)?;
    let layout = Layout::of(f)?;
    translate_rho_in(f, &layout)
}

/// Normalize `f`, then build `K^ψ` and `ρ(ψ)` for the result.
pub fn arith_to_mc(f: &Arith) -> Result<(Kripke, Formula, Layout), ForgeError> {
    let g = normalize_arity(f)?;
    let (k, layout) = assemble_k_phi(&g)?;
    let rho = translate_rho_in(&g, &layout)?;
    Ok((k, rho, layout))
}

/// Translate `f` with variable markers taken from `layout`; `f` may be open
/// as long as its free variables are in the layout.
pub fn translate_rho_in(f: &Arith, layout: &Layout) -> Result<Formula, ForgeError> {
    Ok(match f {
        Arith::True => Formula::Top,
        Arith::False => Formula::Top.bneg(),
        Arith::Lt(a, b) => {
            let x = first_order(layout, a)?;
            let y = first_order(layout, b)?;
            // `SingEx(y)` keeps the root position, where both hooks are vacuous, from counting
            conj([p(x).hook(p(END)), p(y).hook(p("1")), p(y).sing_ex()]).future()
        }
        Arith::Holds(r, args) => {
            let rel = layout.var(r)?;
            let arity = match rel.kind {
                VarKind::SecondOrderUnary => 1,
                VarKind::SecondOrderTuple(l) => l,
                _ => {
                    return Err(ForgeError::WrongKind {
                        var: r.clone(),
                        expected: "a second-order relation",
                    })
                }
            };
            if args.len() != arity {
                return Err(ForgeError::WrongKind {
                    var: r.clone(),
                    expected: "applied to as many arguments as its arity",
                });
            }
            let a = &rel.marker;
            let parts = args
                .iter()
                .enumerate()
                .map(|(j, t)| {
                    let x = first_order(layout, t)?;
                    Ok(conj([p(x).hook(p("1")), p(a).hook(p(&digit(true, j + 1))), p(x).sing_ex()]).future())
                })
                .collect::<Result<Vec<_>, ForgeError>>()?;
            Formula::cond_sing_ex(p(a).future(), conj(parts))
        }
        Arith::Member(fam, sets) => {
            let fa = layout.var(fam)?;
            if fa.kind != VarKind::ThirdOrderUnary {
                return Err(ForgeError::WrongKind {
                    var: fam.clone(),
                    expected: "a unary family",
                });
            }
            let [set] = sets.as_slice() else {
                return Err(ForgeError::WrongKind {
                    var: fam.clone(),
                    expected: "applied to one set",
                });
            };
            let s = layout.var(set)?;
            if s.kind != VarKind::SecondOrderUnary {
                return Err(ForgeError::WrongKind {
                    var: set.clone(),
                    expected: "a unary relation",
                });
            }
            let body = p(&fa.marker).hook(p("1")).biff(p(&s.marker).hook(p("1"))).globally();
            Formula::cond_sing_ex(p(&fa.marker).future(), body)
        }
        Arith::Not(a) => translate_rho_in(a, layout)?.bneg(),
        Arith::And(a, b) => translate_rho_in(a, layout)?.and(translate_rho_in(b, layout)?),
        Arith::Or(a, b) => translate_rho_in(a, layout)?.bor(translate_rho_in(b, layout)?),
        Arith::Implies(a, b) => translate_rho_in(a, layout)?.bimp(translate_rho_in(b, layout)?),
        Arith::Iff(a, b) => translate_rho_in(a, layout)?.biff(translate_rho_in(b, layout)?),
        Arith::Quant(q, x, _, body) => {
            let v = layout.var(x)?;
            let inner = translate_rho_in(body, layout)?;
            let inner = match q {
                Quant::Exists => inner,
                Quant::Forall => inner.bneg(),
            };
            let fx = p(&v.marker).future();
            let ex = match v.kind {
                VarKind::FirstOrder => Formula::cond_sing_ex(fx.clone(), fx.hook(p(END).future()).and(inner)),
                VarKind::SecondOrderUnary => Formula::cond_sing_ex(fx, inner),
                VarKind::SecondOrderTuple(_) => {
                    Formula::cond_sub_ex(fx.clone(), fx.hook(p(END).future().neg().neg()).and(inner))
                }
                VarKind::ThirdOrderUnary => Formula::cond_sub_ex(fx, inner),
            };
            match q {
                Quant::Exists => ex,
                Quant::Forall => ex.bneg(),
            }
        }
        other => {
            return Err(ForgeError::Arith(crate::arith::ArithError::NotNormalForm(format!(
                "atom {other} has no translation"
            ))))
        }
    })
}

fn first_order<'a>(layout: &'a Layout, t: &Term) -> Result<&'a str, ForgeError> {
    let Term::Var(x) = t else {
        return Err(ForgeError::Arith(crate::arith::ArithError::NotNormalForm(format!(
            "term {t:?} is not a variable"
        ))));
    };
    let v = layout.var(x)?;
    if v.kind != VarKind::FirstOrder {
        return Err(ForgeError::WrongKind {
            var: x.clone(),
            expected: "first-order",
        });
    }
    Ok(&v.marker)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_arith;
    use crate::formula::{fragment_check, FragmentMode, TemporalOp};
    use crate::team::Team;

    fn f_only() -> std::collections::BTreeSet<TemporalOp> {
        TemporalOp::parse_set("F").unwrap()
    }

    #[test]
    fn lt_template() {
        let l = Layout::new([("x", VarKind::FirstOrder), ("y", VarKind::FirstOrder)]).unwrap();
        let f = parse_arith("(lt x y)").unwrap();
        let r = translate_rho_in(&f, &l).unwrap();
        assert_eq!(
            crate::formula::print(&r),
            "F ((@x1 ~> @end) & (@x2 ~> 1) & E1 @x2)"
        );
        assert!(fragment_check(&r, &f_only(), 1, FragmentMode::Lenient));
    }

    #[test]
    fn lt_on_numbers() {
        let l = Layout::new([("x", VarKind::FirstOrder), ("y", VarKind::FirstOrder)]).unwrap();
        let r = translate_rho_in(&parse_arith("(lt x y)").unwrap(), &l).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let team = Team::new(
                    l.alphabet().clone(),
                    vec![l.encode_number("x", a).unwrap(), l.encode_number("y", b).unwrap()],
                )
                .unwrap();
                assert_eq!(crate::eval::check(&team, &r).unwrap(), a < b, "{a} < {b}");
            }
        }
    }

    #[test]
    fn sentences_are_depth_one() {
        for s in [
            "(exists (x 1) (exists (y 1) (lt x y)))",
            "(forall (A (2 1)) (exists (x 1) (holds A x)))",
            "(exists (R (2 2)) (forall (x 1) (exists (y 1) (holds R x y))))",
            "(exists (a (3 1)) (forall (A (2 1)) (iff (member a A) (not (member a A)))))",
        ] {
            let f = parse_arith(s).unwrap();
            let r = translate_rho(&f).unwrap();
            assert!(fragment_check(&r, &f_only(), 1, FragmentMode::Lenient), "{s}");
        }
    }

    #[test]
    fn rejects_non_normal() {
        let f = parse_arith("(exists (x 1) (eq x x))").unwrap();
        assert!(translate_rho(&f).is_err());
    }
}
