//! From model checking to satisfiability.
//!
//! The output formula is satisfiable iff `T(K) ⊨ φ`. It first pins the team
//! down to the full team over `Φ` plus the prototraces `∅* {p} {#}^ω`, then
//! hands `φ` only the traces of `K`. The X-free modes recover the successor
//! relation from pairs of prototraces and control stuttering across the
//! team; the ultimately-constant modes restrict the unions of prototraces;
//! the finite mode delays the first label behind a `root` prefix.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use super::{ForgeError, HASH, ROOT};
use crate::formula::{bool_disj, conj, fragment_check, split_disj, Formula, FragmentMode, TemporalOp};
use crate::kripke::Kripke;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mc2SatMode {
    /// Characteristic formula with `X`; any `φ`.
    WithX,
    /// `LTL_2(∼, F)` output for X-free `φ` of depth at most two.
    XFree,
    /// Ultimately constant traces only; states need distinct labels.
    UlcXFree,
    /// As `UlcXFree`, for teams generated by a finite structure.
    FiniteUlc,
}

impl Mc2SatMode {
    pub const ALL: [Mc2SatMode; 4] = [Self::WithX, Self::XFree, Self::UlcXFree, Self::FiniteUlc];

    pub fn name(self) -> &'static str {
        match self {
            Self::WithX => "withX",
            Self::XFree => "xFree",
            Self::UlcXFree => "ulcXFree",
            Self::FiniteUlc => "finiteUlc",
        }
    }
}

impl fmt::Display for Mc2SatMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mc2SatMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown mode `{s}` (expected withX, xFree, ulcXFree or finiteUlc)"))
    }
}

fn p(name: &str) -> Formula {
    Formula::prop(name)
}

fn hash() -> Formula {
    p(HASH)
}

fn fh() -> Formula {
    hash().future()
}

fn not_fh() -> Formula {
    fh().neg()
}

/// Name of the delayed copy `p←`.
fn delayed_name(q: &str) -> String {
    format!("@lp_{}", q.replace('@', ""))
}

/// How `Φ` is referenced while building the formula.
struct Ctx {
    props: Vec<String>,
    mode: Mc2SatMode,
}

impl Ctx {
    fn delayed(&self) -> bool {
        self.mode == Mc2SatMode::FiniteUlc
    }

    /// An occurrence of `q ∈ Φ`; in the finite mode `q ⩔ (root ∧ ¬¬F q←)`.
    fn atom(&self, q: &str) -> Formula {
        if self.delayed() {
            p(q).bor(p(ROOT).and(p(&delayed_name(q)).future().neg().neg()))
        } else {
            p(q)
        }
    }

    fn rewrite(&self, f: &Formula) -> Formula {
        if !self.delayed() {
            return f.clone();
        }
        let set: BTreeSet<&str> = self.props.iter().map(String::as_str).collect();
        map_props(f, &|q| if set.contains(q) { self.atom(q) } else { p(q) })
    }

    fn any_prop(&self) -> Formula {
        split_disj(self.props.iter().map(|q| self.atom(q)))
    }

    /// The conjunct saying that `q` is followed by `#`.
    fn followed_by_hash(&self, q: &str) -> Formula {
        match self.mode {
            Mc2SatMode::WithX => p(q).implies(hash().next()).globally(),
            Mc2SatMode::XFree | Mc2SatMode::UlcXFree => p(q)
                .implies(fh().and(p(q).or(hash()).globally()))
                .globally(),
            Mc2SatMode::FiniteUlc => p(q)
                .or(p(&delayed_name(q)).future())
                .implies(fh().and(split_disj([p(ROOT), p(q), hash()]).globally()))
                .globally(),
        }
    }

    fn xi_sub_proto(&self) -> Formula {
        let branch = |q: &String| {
            let others = self
                .props
                .iter()
                .filter(|o| *o != q)
                .map(|o| self.atom(o).neg().globally());
            conj(
                [self.atom(q).future()]
                    .into_iter()
                    .chain(others)
                    .chain([self.followed_by_hash(q)])
                    .chain([hash().implies(self.atom(q).neg().and(hash().globally())).globally()]),
            )
        };
        split_disj(self.props.iter().map(branch)).neg().neg()
    }

    fn xi_sup_proto(&self) -> Formula {
        conj(self.props.iter().map(|q| self.atom(q).sing_ex().globally()))
    }

    /// Every selected set of prototraces has its union as a regular trace.
    fn unions(&self) -> Formula {
        let agree = conj(self.props.iter().map(|q| {
            not_fh()
                .hook(self.atom(q).neg())
                .biff(fh().hook(self.atom(q).neg()))
                .globally()
        }));
        Formula::cond_sing_ex(not_fh(), agree)
    }

    fn alpha(&self) -> Formula {
        conj(self.props.iter().map(|q| {
            p(q).globally().future().or(p(q).neg().globally().future())
        }))
    }

    fn alpha_prime(&self) -> Formula {
        fh().hook(conj(self.props.iter().map(|q| {
            p(q).neg()
                .globally()
                .future()
                .bor(p(q).neg().bneg().globally().future())
        })))
    }

    fn xi(&self) -> Formula {
        let proto = fh().hook(self.xi_sub_proto().and(self.xi_sup_proto()));
        let unions = match self.mode {
            Mc2SatMode::WithX | Mc2SatMode::XFree => self.unions(),
            Mc2SatMode::UlcXFree | Mc2SatMode::FiniteUlc => self.alpha_prime().bimp(self.unions()),
        };
        proto.and(Formula::cond_sub_all(fh(), unions))
    }

    fn psi_stutter(&self) -> Formula {
        let any = self.any_prop();
        let phases = bool_disj([hash().neg().and(any.clone().neg()), hash(), any.clone()]);
        let one = Formula::cond_sub_all(fh(), fh().hook(any.future().bimp(phases.globally())));
        let mut parts = vec![];
        for q in &self.props {
            for lit in [self.atom(q), self.atom(q).neg()] {
                for r in &self.props {
                    let active = fh().hook(self.atom(r));
                    let holds = not_fh().hook(lit.clone());
                    parts.push(
                        active
                            .clone()
                            .and(holds.clone())
                            .future()
                            .bimp(active.bimp(holds).globally()),
                    );
                }
            }
        }
        let two = Formula::cond_sing_all(fh(), Formula::cond_sing_all(not_fh(), conj(parts)));
        one.and(two)
    }

    fn psi_root(&self) -> Formula {
        let quiet = conj(
            [p(ROOT), hash().neg()]
                .into_iter()
                .chain(self.props.iter().map(|q| p(q).neg().and(p(&delayed_name(q)).neg()))),
        );
        p(ROOT)
            .and(p(ROOT).neg().future())
            .and(quiet.bor(p(ROOT).neg().globally()).globally())
    }
}

fn map_props(f: &Formula, g: &dyn Fn(&str) -> Formula) -> Formula {
    use Formula::*;
    let m = |a: &Formula| Box::new(map_props(a, g));
    match f {
        Top | Bot => f.clone(),
        Prop(q) => g(q),
        Neg(a) => Neg(m(a)),
        BNeg(a) => BNeg(m(a)),
        Next(a) => Next(m(a)),
        Future(a) => Future(m(a)),
        Globally(a) => Globally(m(a)),
        SubEx(a) => SubEx(m(a)),
        SubAll(a) => SubAll(m(a)),
        SingEx(a) => SingEx(m(a)),
        SingAll(a) => SingAll(m(a)),
        And(a, b) => And(m(a), m(b)),
        SplitOr(a, b) => SplitOr(m(a), m(b)),
        Until(a, b) => Until(m(a), m(b)),
        Release(a, b) => Release(m(a), m(b)),
        BOr(a, b) => BOr(m(a), m(b)),
        BImp(a, b) => BImp(m(a), m(b)),
        BIff(a, b) => BIff(m(a), m(b)),
        Hook(a, b) => Hook(m(a), m(b)),
        CondSubEx(a, b) => CondSubEx(m(a), m(b)),
        CondSubAll(a, b) => CondSubAll(m(a), m(b)),
        CondSingEx(a, b) => CondSingEx(m(a), m(b)),
        CondSingAll(a, b) => CondSingAll(m(a), m(b)),
        Dep(args, t) => Dep(args.iter().map(|a| map_props(a, g)).collect(), m(t)),
    }
}

/// `ξ_⊆proto` over `props`: a singleton satisfies it iff its trace is
/// `∅^n {p} {#}^ω` for some `p ∈ props`.
pub fn xi_sub_proto(props: &[String]) -> Formula {
    Ctx {
        props: props.to_vec(),
        mode: Mc2SatMode::WithX,
    }
    .xi_sub_proto()
}

/// The structure with `@pw_i` markers and the pieces of `χ_K` the X-free
/// modes need.
struct Marked {
    k: Kripke,
    /// Propositions of the original structure.
    base: Vec<String>,
    pw: Vec<String>,
}

impl Marked {
    /// `(¬F#) ↪ ¬¬(p_r ∧ G ⋁_w state_w) ∧ ζ`, with `x`, `y` the helper pair.
    fn chi_prime(&self, ctx: &Ctx, x: &str, y: &str, q_range: &[String]) -> Formula {
        let n = self.k.len();
        let state = |w: usize| {
            let l = self.k.label(w);
            let a = self.k.alphabet();
            let own = ctx.atom(&self.pw[w]);
            let others = (0..n).filter(|&v| v != w).map(|v| ctx.atom(&self.pw[v]).neg());
            let labels = q_range.iter().map(|q| match a.index_of(q) {
                Some(i) if l.contains(i) => ctx.atom(q),
                _ => ctx.atom(q).neg(),
            });
            conj([own].into_iter().chain(others).chain(labels))
        };
        let paths = ctx
            .atom(&self.pw[self.k.root()])
            .and(split_disj((0..n).map(state)).globally());
        not_fh().hook(paths.neg().neg()).and(self.zeta(ctx, x, y))
    }

    fn zeta(&self, ctx: &Ctx, x: &str, y: &str) -> Formula {
        let (xa, ya) = (ctx.atom(x), ctx.atom(y));
        let zeta1 = fh().hook(
            xa.clone()
                .or(ya.clone())
                .bneg()
                .and(hash().or(xa.clone()).bneg())
                .and(
                    hash()
                        .or(conj([xa.clone().neg(), ya.clone().neg(), hash().neg()]))
                        .bneg(),
                )
                .globally(),
        );
        let step = |tr: &Formula, w: usize| {
            fh().hook(tr.clone().neg())
                .bor(not_fh().hook(ctx.atom(&self.pw[w])))
                .globally()
        };
        let zeta2 = bool_disj(
            self.k
                .edges()
                .into_iter()
                .map(|(w, v)| step(&xa, w).and(step(&ya, v))),
        );
        Formula::cond_sing_all(
            not_fh(),
            Formula::cond_sing_all(
                fh().and(xa.future()),
                Formula::cond_sing_all(fh().and(ya.future()), zeta1.bimp(zeta2)),
            ),
        )
    }
}

/// Reduce `T(K) ⊨ φ` to satisfiability of the returned formula.
pub fn mc2sat(phi: &Formula, k: &Kripke, mode: Mc2SatMode) -> Result<Formula, ForgeError> {
    let (k2, chi) = k.chi_formula()?;
    let base: Vec<String> = k.alphabet().names().to_vec();
    let pw: Vec<String> = k2.alphabet().names()[base.len()..].to_vec();
    for q in phi.props() {
        if !base.contains(&q) {
            return Err(ForgeError::UnknownProposition(q));
        }
    }
    if matches!(mode, Mc2SatMode::UlcXFree | Mc2SatMode::FiniteUlc) {
        let mut seen: BTreeMap<_, usize> = BTreeMap::new();
        for w in 0..k.len() {
            let l = k.label(w);
            if let Some(&v) = seen.get(&l.iter().collect::<Vec<_>>()) {
                return Err(ForgeError::DuplicateLabel(v, w));
            }
            seen.insert(l.iter().collect::<Vec<_>>(), w);
        }
    }
    if mode != Mc2SatMode::WithX {
        let max_depth = if mode == Mc2SatMode::FiniteUlc { 1 } else { 2 };
        let f = TemporalOp::parse_set("F").expect("valid operator set");
        if !fragment_check(phi, &f, max_depth, FragmentMode::Lenient) {
            return Err(ForgeError::Fragment(format!(
                "mode {mode} needs an X-free formula of temporal depth at most {max_depth} built from F and G"
            )));
        }
    }

    let mut props: Vec<String> = base.iter().chain(&pw).cloned().collect();
    if props.len() < 2 {
        return Err(ForgeError::TooFewProps(props.len()));
    }
    if mode != Mc2SatMode::WithX {
        // two helper pairs are needed; pad with fresh propositions
        let mut i = 0;
        while props.len() < 4 {
            let name = format!("@aux{i}");
            if !props.contains(&name) {
                props.push(name);
            }
            i += 1;
        }
    }
    let mut generated: BTreeSet<String> = [HASH.to_string(), ROOT.to_string()].into();
    if mode == Mc2SatMode::FiniteUlc {
        generated.extend(props.iter().map(|q| delayed_name(q)));
        if generated.len() != props.len() + 2 {
            return Err(ForgeError::ReservedName("@lp_".into()));
        }
    }
    if let Some(q) = props.iter().find(|q| generated.contains(*q)) {
        return Err(ForgeError::ReservedName(q.clone()));
    }

    let ctx = Ctx { props, mode };
    let out = match mode {
        Mc2SatMode::WithX => ctx.xi().and(chi.hook(phi.clone())),
        _ => {
            let marked = Marked {
                k: k2,
                base: base.clone(),
                pw,
            };
            let q_range: Vec<String> = ctx
                .props
                .iter()
                .filter(|q| !marked.pw.contains(q))
                .cloned()
                .collect();
            debug_assert!(marked.base.iter().all(|b| q_range.contains(b)));
            let [x, y, x2, y2] = [0, 1, 2, 3].map(|i| ctx.props[i].clone());
            let quiet = |a: &str, b: &str| fh().hook(conj([ctx.atom(a).neg(), ctx.atom(b).neg()]).globally());
            let left = conj([
                quiet(&x2, &y2),
                marked.chi_prime(&ctx, &x, &y, &q_range),
                not_fh().hook(ctx.rewrite(phi)),
            ]);
            let right = quiet(&x, &y).and(marked.chi_prime(&ctx, &x2, &y2, &q_range).bneg());
            let mc = left.or(right);
            let mut parts = vec![ctx.xi(), ctx.psi_stutter()];
            if mode != Mc2SatMode::XFree {
                parts.push(ctx.alpha().neg().neg());
            }
            parts.push(mc);
            if mode == Mc2SatMode::FiniteUlc {
                parts.push(ctx.psi_root());
            }
            conj(parts)
        }
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::check;
    use crate::formula::parse;
    use crate::team::Team;
    use crate::trace::{Alphabet, Label, LassoTrace};

    fn two_state() -> Kripke {
        let a = Alphabet::new(["p", "q"]).unwrap();
        let l0 = a.label(["p"]).unwrap();
        let l1 = a.label(["q"]).unwrap();
        Kripke::new(a, 2, &[(0, 1), (1, 0), (1, 1)], vec![l0, l1], 0).unwrap()
    }

    #[test]
    fn proto_recognizer() {
        let props = vec!["p".to_string(), "q".to_string()];
        let a = Alphabet::new(["p", "q", HASH]).unwrap();
        let f = xi_sub_proto(&props);
        let l = |n: &[&str]| a.label(n.iter().copied()).unwrap();
        let good = LassoTrace::new(vec![Label::EMPTY, Label::EMPTY, l(&["p"])], vec![l(&[HASH])]).unwrap();
        let bad = LassoTrace::new(vec![Label::EMPTY, l(&["p"]), l(&["q"])], vec![l(&[HASH])]).unwrap();
        assert!(check(&Team::new(a.clone(), vec![good]).unwrap(), &f).unwrap());
        assert!(!check(&Team::new(a, vec![bad]).unwrap(), &f).unwrap());
    }

    #[test]
    fn x_free_modes_stay_in_fragment() {
        let k = two_state();
        let phi = parse("F p | G q").unwrap();
        let f = TemporalOp::parse_set("F").unwrap();
        for mode in [Mc2SatMode::XFree, Mc2SatMode::UlcXFree, Mc2SatMode::FiniteUlc] {
            let out = mc2sat(&phi, &k, mode).unwrap();
            assert!(out.is_x_free(), "{mode}");
            assert!(fragment_check(&out, &f, 2, FragmentMode::Lenient), "{mode}");
        }
    }

    #[test]
    fn with_x_contains_hook() {
        let k = two_state();
        let phi = parse("F p").unwrap();
        let out = mc2sat(&phi, &k, Mc2SatMode::WithX).unwrap();
        let (_, chi) = k.chi_formula().unwrap();
        let Formula::And(_, rhs) = &out else { panic!() };
        assert_eq!(**rhs, chi.hook(phi));
    }

    #[test]
    fn errors() {
        let k = two_state();
        assert!(matches!(
            mc2sat(&parse("F r").unwrap(), &k, Mc2SatMode::XFree),
            Err(ForgeError::UnknownProposition(_))
        ));
        assert!(matches!(
            mc2sat(&parse("X p").unwrap(), &k, Mc2SatMode::XFree),
            Err(ForgeError::Fragment(_))
        ));
        assert!(matches!(
            mc2sat(&parse("F G p").unwrap(), &k, Mc2SatMode::FiniteUlc),
            Err(ForgeError::Fragment(_))
        ));
        let a = Alphabet::new(["p"]).unwrap();
        let l = a.label(["p"]).unwrap();
        let dup = Kripke::new(a, 2, &[(0, 1), (1, 0)], vec![l, l], 0).unwrap();
        assert_eq!(
            mc2sat(&parse("p").unwrap(), &dup, Mc2SatMode::UlcXFree),
            Err(ForgeError::DuplicateLabel(0, 1))
        );
        let a = Alphabet::new(Vec::<String>::new()).unwrap();
        let one = Kripke::new(a, 1, &[(0, 0)], vec![Label::EMPTY], 0).unwrap();
        assert_eq!(mc2sat(&Formula::Top, &one, Mc2SatMode::WithX), Err(ForgeError::TooFewProps(1)));
    }

    #[test]
    fn stutter_control_rejects_overlap() {
        // two prototraces that overlap in one active position but not the other
        let props = vec!["p".to_string(), "q".to_string()];
        let ctx = Ctx {
            props,
            mode: Mc2SatMode::XFree,
        };
        let a = Alphabet::new(["p", "q", HASH]).unwrap();
        let l = |n: &[&str]| a.label(n.iter().copied()).unwrap();
        let t = LassoTrace::new(vec![Label::EMPTY, l(&["p"]), l(&["p"])], vec![l(&[HASH])]).unwrap();
        let skew = LassoTrace::new(vec![Label::EMPTY, Label::EMPTY, l(&["q"]), l(&["q"])], vec![l(&[HASH])]).unwrap();
        let aligned = LassoTrace::new(vec![Label::EMPTY, l(&["q"]), l(&["q"])], vec![l(&[HASH])]).unwrap();
        let f = ctx.psi_stutter();
        assert!(!check(&Team::new(a.clone(), vec![t.clone(), skew]).unwrap(), &f).unwrap());
        assert!(check(&Team::new(a, vec![t, aligned]).unwrap(), &f).unwrap());
    }
}
