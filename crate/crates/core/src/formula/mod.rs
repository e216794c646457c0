//! LTL(~) formulas: AST, analysis, desugaring, parsing and printing.

mod parse;
mod print;

use std::collections::BTreeSet;

pub use parse::{parse, parse_with, ParseError, ParseOptions};
pub use print::{print, KEYWORDS};

type B = Box<Formula>;

/// AST of LTL(~) including the derived connectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Prop(String),
    /// Classical negation `¬`, true on a team iff every singleton falsifies the body.
    Neg(B),
    And(B, B),
    /// Split disjunction `∨` (written `|`).
    SplitOr(B, B),
    /// Boolean (contradictory) negation `∼` (written `~`).
    BNeg(B),
    Next(B),
    Future(B),
    Globally(B),
    Until(B, B),
    Release(B, B),
    /// `dep(args; target)`.
    Dep(Vec<Formula>, B),
    BOr(B, B),
    BImp(B, B),
    BIff(B, B),
    /// `φ ~> ψ`: the subteam of traces satisfying φ satisfies ψ.
    Hook(B, B),
    SubEx(B),
    SubAll(B),
    SingEx(B),
    SingAll(B),
    CondSubEx(B, B),
    CondSubAll(B, B),
    CondSingEx(B, B),
    CondSingAll(B, B),
}

use Formula::*;

/// Temporal operators, for fragment checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TemporalOp {
    X,
    F,
    G,
    U,
    R,
}

impl TemporalOp {
    pub fn parse_set(s: &str) -> Option<BTreeSet<TemporalOp>> {
        let mut out = BTreeSet::new();
        for c in s.chars().filter(|c| !c.is_whitespace() && *c != ',') {
            out.insert(match c {
                'X' => TemporalOp::X,
                'F' => TemporalOp::F,
                'G' => TemporalOp::G,
                'U' => TemporalOp::U,
                'R' => TemporalOp::R,
                _ => return None,
            });
        }
        Some(out)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FragmentMode {
    /// Operators are counted literally.
    #[default]
    Strict,
    /// `G ≡ ∼F∼`, `R ≡ ∼(∼·U∼·)` and `F ≡ ⊤U·` are applied before checking.
    Lenient,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct DesugarOptions {
    /// Rewrite non-atomic `¬φ` into `SingAll(∼φ)` before expansion.
    pub neg_to_singleton: bool,
}

fn bx(f: Formula) -> B {
    Box::new(f)
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Formula {
        Prop(name.into())
    }
    pub fn neg(self) -> Formula {
        Neg(bx(self))
    }
    pub fn bneg(self) -> Formula {
        BNeg(bx(self))
    }
    pub fn and(self, o: Formula) -> Formula {
        And(bx(self), bx(o))
    }
    pub fn or(self, o: Formula) -> Formula {
        SplitOr(bx(self), bx(o))
    }
    pub fn bor(self, o: Formula) -> Formula {
        BOr(bx(self), bx(o))
    }
    pub fn bimp(self, o: Formula) -> Formula {
        BImp(bx(self), bx(o))
    }
    pub fn biff(self, o: Formula) -> Formula {
        BIff(bx(self), bx(o))
    }
    pub fn hook(self, o: Formula) -> Formula {
        Hook(bx(self), bx(o))
    }
    pub fn next(self) -> Formula {
        Next(bx(self))
    }
    pub fn future(self) -> Formula {
        Future(bx(self))
    }
    pub fn globally(self) -> Formula {
        Globally(bx(self))
    }
    pub fn until(self, o: Formula) -> Formula {
        Until(bx(self), bx(o))
    }
    pub fn release(self, o: Formula) -> Formula {
        Release(bx(self), bx(o))
    }
    pub fn sub_ex(self) -> Formula {
        SubEx(bx(self))
    }
    pub fn sub_all(self) -> Formula {
        SubAll(bx(self))
    }
    pub fn sing_ex(self) -> Formula {
        SingEx(bx(self))
    }
    pub fn sing_all(self) -> Formula {
        SingAll(bx(self))
    }
    pub fn cond_sub_ex(guard: Formula, body: Formula) -> Formula {
        CondSubEx(bx(guard), bx(body))
    }
    pub fn cond_sub_all(guard: Formula, body: Formula) -> Formula {
        CondSubAll(bx(guard), bx(body))
    }
    pub fn cond_sing_ex(guard: Formula, body: Formula) -> Formula {
        CondSingEx(bx(guard), bx(body))
    }
    pub fn cond_sing_all(guard: Formula, body: Formula) -> Formula {
        CondSingAll(bx(guard), bx(body))
    }
    pub fn dep(args: Vec<Formula>, target: Formula) -> Formula {
        Dep(args, bx(target))
    }
    /// Classical implication `¬a ∨ b`.
    pub fn implies(self, o: Formula) -> Formula {
        self.neg().or(o)
    }

    /// Direct children in left-to-right order (guards first).
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Top | Bot | Prop(_) => vec![],
            Neg(a) | BNeg(a) | Next(a) | Future(a) | Globally(a) | SubEx(a) | SubAll(a)
            | SingEx(a) | SingAll(a) => vec![a],
            And(a, b) | SplitOr(a, b) | Until(a, b) | Release(a, b) | BOr(a, b)
            | BImp(a, b) | BIff(a, b) | Hook(a, b) | CondSubEx(a, b) | CondSubAll(a, b)
            | CondSingEx(a, b) | CondSingAll(a, b) => vec![a, b],
            Dep(args, t) => args.iter().chain(std::iter::once(t.as_ref())).collect(),
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Propositions in order of first occurrence.
    pub fn props(&self) -> Vec<String> {
        fn go(f: &Formula, seen: &mut BTreeSet<String>, out: &mut Vec<String>) {
            if let Prop(p) = f {
                if seen.insert(p.clone()) {
                    out.push(p.clone());
                }
            }
            for c in f.children() {
                go(c, seen, out);
            }
        }
        let mut out = vec![];
        go(self, &mut BTreeSet::new(), &mut out);
        out
    }

    /// Temporal depth; sugar contributes what its expansion contributes.
    pub fn temporal_depth(&self) -> usize {
        match self {
            Top | Bot | Prop(_) => 0,
            Next(a) | Future(a) | Globally(a) => a.temporal_depth() + 1,
            Until(a, b) | Release(a, b) => a.temporal_depth().max(b.temporal_depth()) + 1,
            _ => self
                .children()
                .iter()
                .map(|c| c.temporal_depth())
                .max()
                .unwrap_or(0),
        }
    }

    /// Temporal operators occurring in the formula (as written).
    pub fn temporal_ops(&self) -> BTreeSet<TemporalOp> {
        fn go(f: &Formula, out: &mut BTreeSet<TemporalOp>) {
            match f {
                Next(_) => {
                    out.insert(TemporalOp::X);
                }
                Future(_) => {
                    out.insert(TemporalOp::F);
                }
                Globally(_) => {
                    out.insert(TemporalOp::G);
                }
                Until(..) => {
                    out.insert(TemporalOp::U);
                }
                Release(..) => {
                    out.insert(TemporalOp::R);
                }
                _ => {}
            }
            for c in f.children() {
                go(c, out);
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Only the core kinds `{Prop, ¬, ∧, ∨, ∼, X, F, G, U, R, ⊤, ⊥}` occur.
    pub fn is_core(&self) -> bool {
        matches!(
            self,
            Top | Bot
                | Prop(_)
                | Neg(_)
                | And(..)
                | SplitOr(..)
                | BNeg(_)
                | Next(_)
                | Future(_)
                | Globally(_)
                | Until(..)
                | Release(..)
        ) && self.children().iter().all(|c| c.is_core())
    }

    /// Classical LTL: no `∼`, no dependence atoms, no team sugar.
    pub fn is_pure_ltl(&self) -> bool {
        matches!(
            self,
            Top | Bot
                | Prop(_)
                | Neg(_)
                | And(..)
                | SplitOr(..)
                | Next(_)
                | Future(_)
                | Globally(_)
                | Until(..)
                | Release(..)
        ) && self.children().iter().all(|c| c.is_pure_ltl())
    }

    /// The desugared formula contains no `∼`.
    pub fn is_tilde_free(&self) -> bool {
        match self {
            BNeg(_) | BOr(..) | BImp(..) | BIff(..) | SubAll(_) | SingEx(_) | SingAll(_)
            | CondSubAll(..) | CondSingEx(..) | CondSingAll(..) | Dep(..) => false,
            // ¬ only looks at singletons; its body may be anything
            Neg(_) => true,
            _ => self.children().iter().all(|c| c.is_tilde_free()),
        }
    }

    pub fn is_x_free(&self) -> bool {
        !matches!(self, Next(_)) && self.children().iter().all(|c| c.is_x_free())
    }

    /// A sound syntactic criterion for downward closure.
    ///
    /// Covers every `∼`-free formula, plus the kinds that only inspect
    /// singletons or all subteams.
    pub fn is_downward_closed(&self) -> bool {
        match self {
            Top | Bot | Prop(_) | Neg(_) | Dep(..) | SingAll(_) | SubAll(_) => true,
            And(a, b) | SplitOr(a, b) | Until(a, b) | Release(a, b) | BOr(a, b) => {
                a.is_downward_closed() && b.is_downward_closed()
            }
            Next(a) | Future(a) | Globally(a) => a.is_downward_closed(),
            Hook(_, b) | CondSubAll(_, b) | CondSingAll(_, b) | CondSubEx(_, b) => {
                b.is_downward_closed()
            }
            BNeg(_) | BImp(..) | BIff(..) | SubEx(_) | SingEx(_) | CondSingEx(..) => false,
        }
    }

    pub fn desugar(&self) -> Formula {
        self.desugar_with(DesugarOptions::default())
    }

    pub fn desugar_with(&self, o: DesugarOptions) -> Formula {
        let d = |f: &Formula| f.desugar_with(o);
        match self {
            Top => Top,
            Bot => Bot,
            Prop(p) => Prop(p.clone()),
            Neg(a) => {
                if o.neg_to_singleton && !matches!(**a, Prop(_)) {
                    a.as_ref().clone().bneg().sing_all().desugar_with(o)
                } else {
                    d(a).neg()
                }
            }
            And(a, b) => d(a).and(d(b)),
            SplitOr(a, b) => d(a).or(d(b)),
            BNeg(a) => d(a).bneg(),
            Next(a) => d(a).next(),
            Future(a) => d(a).future(),
            Globally(a) => d(a).globally(),
            Until(a, b) => d(a).until(d(b)),
            Release(a, b) => d(a).release(d(b)),
            BOr(a, b) => d_bor(d(a), d(b)),
            BImp(a, b) => d_bor(d(a).bneg(), d(b)),
            BIff(a, b) => {
                let (a, b) = (d(a), d(b));
                d_bor(a.clone().bneg(), b.clone()).and(d_bor(b.bneg(), a))
            }
            Hook(a, b) => {
                let a = d(a);
                a.clone().neg().or(a.neg().neg().and(d(b)))
            }
            SubEx(a) => Top.or(d(a)),
            SubAll(a) => Top.or(d(a).bneg()).bneg(),
            SingEx(a) => d_sing_ex(d(a)),
            SingAll(a) => d_sing_ex(d(a).bneg()).bneg(),
            CondSubEx(g, a) => d_cond_sub_ex(d(g), d(a)),
            CondSubAll(g, a) => d_cond_sub_ex(d(g), d(a).bneg()).bneg(),
            CondSingEx(g, a) => d_cond_sing_ex(d(g), d(a)),
            CondSingAll(g, a) => d_cond_sing_ex(d(g), d(a).bneg()).bneg(),
            Dep(args, t) => {
                let t = d(t);
                if args.is_empty() {
                    d_dep1(t)
                } else {
                    let ants = conj(args.iter().map(|a| d_dep1(d(a))));
                    Top.or(ants.and(d_dep1(t).bneg())).bneg()
                }
            }
        }
    }
}

fn d_bor(a: Formula, b: Formula) -> Formula {
    a.bneg().and(b.bneg()).bneg()
}

fn d_sing_ex(a: Formula) -> Formula {
    // SubEx(∼⊥ ∧ SubAll(⊥ ⩔ a))
    let inner = Top.or(d_bor(Bot, a).bneg()).bneg();
    Top.or(Bot.bneg().and(inner))
}

fn d_cond_sub_ex(g: Formula, a: Formula) -> Formula {
    g.neg().neg().or(a)
}

fn d_cond_sing_ex(g: Formula, a: Formula) -> Formula {
    let one = d_sing_ex(g.clone());
    let inner = d_cond_sub_ex(g.clone(), one.clone().and(a.bneg()));
    d_cond_sub_ex(g, one.and(inner.bneg()))
}

/// `dep(φ) ≡ ¬¬φ ⩔ ¬φ`.
fn d_dep1(a: Formula) -> Formula {
    d_bor(a.clone().neg().neg(), a.neg())
}

/// Left-nested conjunction; `⊤` when empty.
pub fn conj<I: IntoIterator<Item = Formula>>(it: I) -> Formula {
    it.into_iter().reduce(|a, b| a.and(b)).unwrap_or(Top)
}

/// Left-nested split disjunction; `⊥` when empty.
pub fn split_disj<I: IntoIterator<Item = Formula>>(it: I) -> Formula {
    it.into_iter().reduce(|a, b| a.or(b)).unwrap_or(Bot)
}

/// Left-nested Boolean disjunction; `∼⊤` when empty.
pub fn bool_disj<I: IntoIterator<Item = Formula>>(it: I) -> Formula {
    it.into_iter()
        .reduce(|a, b| a.bor(b))
        .unwrap_or_else(|| Top.bneg())
}

/// Does `φ` lie in `LTL_k(ops)`?
pub fn fragment_check(
    phi: &Formula,
    ops: &BTreeSet<TemporalOp>,
    k: usize,
    mode: FragmentMode,
) -> bool {
    use TemporalOp as T;
    let d = phi.desugar();
    if d.temporal_depth() > k {
        return false;
    }
    let has = |o| ops.contains(&o);
    d.temporal_ops().into_iter().all(|op| match mode {
        FragmentMode::Strict => has(op),
        FragmentMode::Lenient => match op {
            T::X => has(T::X),
            T::U => has(T::U),
            T::F => has(T::F) || has(T::U),
            T::G => has(T::G) || has(T::F) || has(T::U),
            T::R => has(T::R) || has(T::U),
        },
    })
}
