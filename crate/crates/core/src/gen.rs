//! Seeded random generators for traces, teams and formulas.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::Formula;
use crate::kripke::Kripke;
use crate::team::Team;
use crate::trace::{Alphabet, Label, LassoTrace};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape bounds for random lassos.
#[derive(Clone, Copy, Debug)]
pub struct LassoShape {
    pub max_prefix: usize,
    pub max_loop: usize,
}

impl Default for LassoShape {
    fn default() -> Self {
        LassoShape {
            max_prefix: 3,
            max_loop: 3,
        }
    }
}

pub fn random_label<R: Rng>(rng: &mut R, props: usize) -> Label {
    Label::from_indices((0..props).filter(|_| rng.gen_bool(0.5)))
}

pub fn random_lasso<R: Rng>(rng: &mut R, props: usize, shape: LassoShape) -> LassoTrace {
    let pre = rng.gen_range(0..=shape.max_prefix);
    let cyc = rng.gen_range(1..=shape.max_loop.max(1));
    LassoTrace::new(
        (0..pre).map(|_| random_label(rng, props)).collect(),
        (0..cyc).map(|_| random_label(rng, props)).collect(),
    )
    .expect("loop non-empty")
}

/// Team of `0..=max_traces` random lassos (duplicates merged).
pub fn random_team<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    max_traces: usize,
    shape: LassoShape,
) -> Team {
    let n = rng.gen_range(0..=max_traces);
    let traces = (0..n)
        .map(|_| random_lasso(rng, alphabet.len(), shape))
        .collect();
    Team::new(alphabet.clone(), traces).expect("labels within alphabet")
}

/// A finite, seeded stream of random teams.
pub fn team_sampler(
    seed: u64,
    alphabet: Alphabet,
    max_traces: usize,
    shape: LassoShape,
    count: usize,
) -> impl Iterator<Item = Team> {
    let mut r = rng(seed);
    (0..count).map(move |_| random_team(&mut r, &alphabet, max_traces, shape))
}

/// Node kinds a formula generator may emit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Neg,
    And,
    Or,
    BNeg,
    Next,
    Future,
    Globally,
    Until,
    Release,
    Dep,
    BOr,
    BImp,
    BIff,
    Hook,
    SubEx,
    SubAll,
    SingEx,
    SingAll,
    CondSubEx,
    CondSubAll,
    CondSingEx,
    CondSingAll,
}

impl Kind {
    fn temporal(self) -> bool {
        matches!(
            self,
            Kind::Next | Kind::Future | Kind::Globally | Kind::Until | Kind::Release
        )
    }

    pub const PURE: &'static [Kind] = &[
        Kind::Neg,
        Kind::And,
        Kind::Or,
        Kind::Next,
        Kind::Future,
        Kind::Globally,
        Kind::Until,
        Kind::Release,
    ];

    pub const TILDE_FREE: &'static [Kind] = &[
        Kind::Neg,
        Kind::And,
        Kind::Or,
        Kind::Next,
        Kind::Future,
        Kind::Globally,
        Kind::Until,
        Kind::Release,
        Kind::Hook,
        Kind::SubEx,
        Kind::CondSubEx,
    ];

    pub const ALL: &'static [Kind] = &[
        Kind::Neg,
        Kind::And,
        Kind::Or,
        Kind::BNeg,
        Kind::Next,
        Kind::Future,
        Kind::Globally,
        Kind::Until,
        Kind::Release,
        Kind::Dep,
        Kind::BOr,
        Kind::BImp,
        Kind::BIff,
        Kind::Hook,
        Kind::SubEx,
        Kind::SubAll,
        Kind::SingEx,
        Kind::SingAll,
        Kind::CondSubEx,
        Kind::CondSubAll,
        Kind::CondSingEx,
        Kind::CondSingAll,
    ];

    pub const SUGAR: &'static [Kind] = &[
        Kind::Dep,
        Kind::BOr,
        Kind::BImp,
        Kind::BIff,
        Kind::Hook,
        Kind::SubEx,
        Kind::SubAll,
        Kind::SingEx,
        Kind::SingAll,
        Kind::CondSubEx,
        Kind::CondSubAll,
        Kind::CondSingEx,
        Kind::CondSingAll,
    ];
}

/// Random formula generator over a fixed proposition set.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub props: Vec<String>,
    pub kinds: Vec<Kind>,
    /// Maximal AST height.
    pub max_height: usize,
    /// Maximal temporal depth.
    pub max_td: usize,
    /// Allow `⊤`/`⊥` leaves.
    pub constants: bool,
}

impl FormulaGen {
    pub fn new(props: &[&str], kinds: &[Kind], max_height: usize, max_td: usize) -> Self {
        FormulaGen {
            props: props.iter().map(|s| s.to_string()).collect(),
            kinds: kinds.to_vec(),
            max_height,
            max_td,
            constants: true,
        }
    }

    pub fn without(mut self, k: Kind) -> Self {
        self.kinds.retain(|x| *x != k);
        self
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Formula {
        self.go(rng, self.max_height, self.max_td)
    }

    fn leaf<R: Rng>(&self, rng: &mut R) -> Formula {
        if self.constants && rng.gen_bool(0.1) {
            if rng.gen_bool(0.5) {
                Formula::Top
            } else {
                Formula::Bot
            }
        } else {
            Formula::prop(self.props.choose(rng).expect("non-empty props").clone())
        }
    }

    fn go<R: Rng>(&self, rng: &mut R, height: usize, td: usize) -> Formula {
        if height == 0 || rng.gen_bool(0.2) {
            return self.leaf(rng);
        }
        let options: Vec<Kind> = self
            .kinds
            .iter()
            .copied()
            .filter(|k| td > 0 || !k.temporal())
            .collect();
        let Some(&k) = options.choose(rng) else {
            return self.leaf(rng);
        };
        let h = height - 1;
        let sub = |rng: &mut R, td: usize| self.go(rng, h, td);
        match k {
            Kind::Neg => sub(rng, td).neg(),
            Kind::BNeg => sub(rng, td).bneg(),
            Kind::And => sub(rng, td).and(sub(rng, td)),
            Kind::Or => sub(rng, td).or(sub(rng, td)),
            Kind::Next => sub(rng, td - 1).next(),
            Kind::Future => sub(rng, td - 1).future(),
            Kind::Globally => sub(rng, td - 1).globally(),
            Kind::Until => sub(rng, td - 1).until(sub(rng, td - 1)),
            Kind::Release => sub(rng, td - 1).release(sub(rng, td - 1)),
            Kind::Dep => {
                let n = rng.gen_range(0..=2);
                let args = (0..n).map(|_| sub(rng, td)).collect();
                Formula::dep(args, sub(rng, td))
            }
            Kind::BOr => sub(rng, td).bor(sub(rng, td)),
            Kind::BImp => sub(rng, td).bimp(sub(rng, td)),
            Kind::BIff => sub(rng, td).biff(sub(rng, td)),
            Kind::Hook => sub(rng, td).hook(sub(rng, td)),
            Kind::SubEx => sub(rng, td).sub_ex(),
            Kind::SubAll => sub(rng, td).sub_all(),
            Kind::SingEx => sub(rng, td).sing_ex(),
            Kind::SingAll => sub(rng, td).sing_all(),
            Kind::CondSubEx => Formula::cond_sub_ex(sub(rng, td), sub(rng, td)),
            Kind::CondSubAll => Formula::cond_sub_all(sub(rng, td), sub(rng, td)),
            Kind::CondSingEx => Formula::cond_sing_ex(sub(rng, td), sub(rng, td)),
            Kind::CondSingAll => Formula::cond_sing_all(sub(rng, td), sub(rng, td)),
        }
    }
}

/// Random serial structure with `1..=max_states` states rooted at 0.
pub fn random_kripke<R: Rng>(rng: &mut R, alphabet: &Alphabet, max_states: usize) -> Kripke {
    let n = rng.gen_range(1..=max_states.max(1));
    let mut edges = vec![];
    for w in 0..n {
        let out = rng.gen_range(1..=2);
        for _ in 0..out {
            edges.push((w, rng.gen_range(0..n)));
        }
    }
    let labels = (0..n).map(|_| random_label(rng, alphabet.len())).collect();
    Kripke::new(alphabet.clone(), n, &edges, labels, 0).expect("serial by construction")
}
