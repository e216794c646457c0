//! Exact evaluation of LTL(~) over finite lasso teams.
//!
//! Subteams are bitmasks over the base team. Every temporal search is
//! bounded by the horizon `H = P + L`: from shift `s` the canonical shifts
//! `s, s+1, …` become periodic after `reach(s)` steps, so the earliest
//! witness of `F`/`U` (and the earliest counterexample of `G`/`R`) always
//! occurs within that window.

mod classical;
pub mod probe;

use std::collections::HashMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::formula::Formula;
use crate::team::{Horizon, Team, TeamError};
use crate::trace::LassoTrace;

pub use classical::check_classical;

/// Default cap on visited memo states.
pub const DEFAULT_BUDGET: u64 = 100_000_000;
/// Maximum team size (subteams are `u128` masks).
pub const MAX_TEAM: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error(transparent)]
    Team(#[from] TeamError),
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("evaluation budget of {0} states exceeded")]
    BudgetExceeded(u64),
    #[error("team of {0} traces exceeds the cap of {MAX_TEAM}")]
    TeamTooLarge(usize),
    #[error("formula is not classical LTL: {0}")]
    NonClassicalFormula(String),
}

/// How split disjunctions enumerate covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SplitMode {
    /// Exact 2-partitions when one side is downward closed, else 3-way.
    #[default]
    Auto,
    /// Always enumerate left/right/both assignments.
    ThreeWay,
}

#[derive(Clone, Copy, Debug)]
pub struct EvalConfig {
    pub budget: u64,
    pub split: SplitMode,
    /// Enumerate split covers in a seeded random order instead of ascending.
    pub shuffle_seed: Option<u64>,
    /// Evaluate `Dep` directly rather than through its definition.
    pub native_dep: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            budget: DEFAULT_BUDGET,
            split: SplitMode::Auto,
            shuffle_seed: None,
            native_dep: true,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub states: u64,
    pub memo_hits: u64,
    pub splits: u64,
    pub nodes: u64,
}

type Id = u32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Node {
    Top,
    Bot,
    Prop(usize),
    Neg(Id),
    And(Id, Id),
    Or(Id, Id),
    BNeg(Id),
    Next(Id),
    Future(Id),
    Globally(Id),
    Until(Id, Id),
    Release(Id, Id),
    Dep(Vec<Id>, Id),
    BOr(Id, Id),
    BImp(Id, Id),
    BIff(Id, Id),
    Hook(Id, Id),
    SubEx(Id),
    SubAll(Id),
    SingEx(Id),
    SingAll(Id),
    CondSubEx(Id, Id),
    CondSubAll(Id, Id),
    CondSingEx(Id, Id),
    CondSingAll(Id, Id),
}

#[derive(Clone, Debug)]
struct ShiftInfo {
    /// `rep[i]` is the smallest index whose suffix equals trace `i`'s.
    rep: Vec<u8>,
    dups: bool,
}

/// Evaluation context for one team; formulas may be checked repeatedly.
pub struct Evaluator<'t> {
    team: &'t Team,
    horizon: Horizon,
    config: EvalConfig,
    nodes: Vec<Node>,
    dc: Vec<bool>,
    intern: HashMap<Node, Id>,
    memo: FxHashMap<(Id, u32, u128), bool>,
    /// Per trace, suffix identity at each local canonical position.
    suffix_ids: Vec<Vec<u32>>,
    shifts: Vec<Option<ShiftInfo>>,
    stats: Stats,
    visits: u64,
}

#[inline]
fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Submasks of `m` in ascending numeric order.
fn submasks(m: u128) -> impl Iterator<Item = u128> {
    let mut cur = Some(0u128);
    std::iter::from_fn(move || {
        let s = cur?;
        cur = if s == m {
            None
        } else {
            Some(s.wrapping_sub(m) & m)
        };
        Some(s)
    })
}

impl<'t> Evaluator<'t> {
    pub fn new(team: &'t Team, config: EvalConfig) -> Result<Self, EvalError> {
        if team.len() > MAX_TEAM {
            return Err(EvalError::TeamTooLarge(team.len()));
        }
        let horizon = team.horizon()?;
        let mut ids: HashMap<LassoTrace, u32> = HashMap::new();
        let suffix_ids = team
            .traces()
            .iter()
            .map(|t| {
                (0..t.span())
                    .map(|c| {
                        let n = ids.len() as u32;
                        *ids.entry(t.suffix(c)).or_insert(n)
                    })
                    .collect()
            })
            .collect();
        Ok(Evaluator {
            team,
            horizon,
            config,
            nodes: vec![],
            dc: vec![],
            intern: HashMap::new(),
            memo: FxHashMap::default(),
            suffix_ids,
            shifts: vec![None; horizon.total()],
            stats: Stats::default(),
            visits: 0,
        })
    }

    pub fn team(&self) -> &Team {
        self.team
    }

    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn stats(&self) -> Stats {
        Stats {
            nodes: self.nodes.len() as u64,
            ..self.stats
        }
    }

    pub fn full_mask(&self) -> u128 {
        match self.team.len() {
            0 => 0,
            128 => u128::MAX,
            n => (1u128 << n) - 1,
        }
    }

    /// `T ⊨ φ`.
    pub fn check(&mut self, f: &Formula) -> Result<bool, EvalError> {
        let m = self.full_mask();
        self.check_at(f, 0, m)
    }

    /// `T'^k ⊨ φ` for the subteam `T'` given by `mask`.
    pub fn check_at(&mut self, f: &Formula, k: usize, mask: u128) -> Result<bool, EvalError> {
        let id = self.compile(f)?;
        let s = self.horizon.canonical(k) as u32;
        self.eval(id, s, mask & self.full_mask())
    }

    /// Split the team into `(T_γ, T ∖ T_γ)` as masks.
    pub fn condition(&mut self, guard: &Formula) -> Result<(u128, u128), EvalError> {
        let id = self.compile(guard)?;
        let m = self.full_mask();
        let yes = self.sat_singletons(id, 0, m)?;
        Ok((yes, m & !yes))
    }

    fn compile(&mut self, f: &Formula) -> Result<Id, EvalError> {
        use Formula as F;
        if let (F::Dep(args, t), false) = (f, self.config.native_dep) {
            let d = Formula::dep(args.clone(), t.as_ref().clone()).desugar();
            return self.compile(&d);
        }
        let node = match f {
            F::Top => Node::Top,
            F::Bot => Node::Bot,
            F::Prop(p) => Node::Prop(
                self.team
                    .alphabet()
                    .index_of(p)
                    .ok_or_else(|| EvalError::UnknownProposition(p.clone()))?,
            ),
            F::Neg(a) => Node::Neg(self.compile(a)?),
            F::BNeg(a) => Node::BNeg(self.compile(a)?),
            F::Next(a) => Node::Next(self.compile(a)?),
            F::Future(a) => Node::Future(self.compile(a)?),
            F::Globally(a) => Node::Globally(self.compile(a)?),
            F::SubEx(a) => Node::SubEx(self.compile(a)?),
            F::SubAll(a) => Node::SubAll(self.compile(a)?),
            F::SingEx(a) => Node::SingEx(self.compile(a)?),
            F::SingAll(a) => Node::SingAll(self.compile(a)?),
            F::Dep(args, t) => {
                let a = args
                    .iter()
                    .map(|x| self.compile(x))
                    .collect::<Result<Vec<_>, _>>()?;
                Node::Dep(a, self.compile(t)?)
            }
            F::And(a, b)
            | F::SplitOr(a, b)
            | F::Until(a, b)
            | F::Release(a, b)
            | F::BOr(a, b)
            | F::BImp(a, b)
            | F::BIff(a, b)
            | F::Hook(a, b)
            | F::CondSubEx(a, b)
            | F::CondSubAll(a, b)
            | F::CondSingEx(a, b)
            | F::CondSingAll(a, b) => {
                let (x, y) = (self.compile(a)?, self.compile(b)?);
                match f {
                    F::And(..) => Node::And(x, y),
                    F::SplitOr(..) => Node::Or(x, y),
                    F::Until(..) => Node::Until(x, y),
                    F::Release(..) => Node::Release(x, y),
                    F::BOr(..) => Node::BOr(x, y),
                    F::BImp(..) => Node::BImp(x, y),
                    F::BIff(..) => Node::BIff(x, y),
                    F::Hook(..) => Node::Hook(x, y),
                    F::CondSubEx(..) => Node::CondSubEx(x, y),
                    F::CondSubAll(..) => Node::CondSubAll(x, y),
                    F::CondSingEx(..) => Node::CondSingEx(x, y),
                    _ => Node::CondSingAll(x, y),
                }
            }
        };
        if let Some(&id) = self.intern.get(&node) {
            return Ok(id);
        }
        let id = self.nodes.len() as Id;
        self.intern.insert(node.clone(), id);
        self.nodes.push(node);
        self.dc.push(f.is_downward_closed());
        Ok(id)
    }

    fn shift_info(&mut self, s: u32) -> &ShiftInfo {
        let si = s as usize;
        if self.shifts[si].is_none() {
            let mut first: HashMap<u32, u8> = HashMap::new();
            let mut rep = Vec::with_capacity(self.team.len());
            let mut dups = false;
            for (i, t) in self.team.traces().iter().enumerate() {
                let (p, l) = (t.prefix().len(), t.cycle().len());
                let c = if si < p { si } else { p + (si - p) % l };
                let key = self.suffix_ids[i][c];
                let r = *first.entry(key).or_insert(i as u8);
                dups |= r as usize != i;
                rep.push(r);
            }
            self.shifts[si] = Some(ShiftInfo { rep, dups });
        }
        self.shifts[si].as_ref().unwrap()
    }

    fn canon_mask(&mut self, s: u32, m: u128) -> u128 {
        let info = self.shift_info(s);
        if !info.dups {
            return m;
        }
        bits(m).fold(0, |acc, i| acc | 1u128 << info.rep[i])
    }

    #[inline]
    fn step(&self, s: u32, k: usize) -> u32 {
        self.horizon.canonical(s as usize + k) as u32
    }

    /// Members of `m` whose singleton satisfies `id`.
    fn sat_singletons(&mut self, id: Id, s: u32, m: u128) -> Result<u128, EvalError> {
        let mut out = 0;
        for i in bits(m) {
            if self.eval(id, s, 1 << i)? {
                out |= 1 << i;
            }
        }
        Ok(out)
    }

    fn eval(&mut self, id: Id, s: u32, m: u128) -> Result<bool, EvalError> {
        self.visits += 1;
        if self.visits > self.config.budget {
            return Err(EvalError::BudgetExceeded(self.config.budget));
        }
        let m = self.canon_mask(s, m);
        if let Some(&v) = self.memo.get(&(id, s, m)) {
            self.stats.memo_hits += 1;
            return Ok(v);
        }
        let v = self.eval_node(id, s, m)?;
        self.stats.states += 1;
        self.memo.insert((id, s, m), v);
        Ok(v)
    }

    fn eval_node(&mut self, id: Id, s: u32, m: u128) -> Result<bool, EvalError> {
        let node = self.nodes[id as usize].clone();
        Ok(match node {
            Node::Top => true,
            Node::Bot => m == 0,
            Node::Prop(p) => bits(m).all(|i| self.team.traces()[i].at(s as usize).contains(p)),
            Node::Neg(a) => {
                for i in bits(m) {
                    if self.eval(a, s, 1 << i)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::And(a, b) => self.eval(a, s, m)? && self.eval(b, s, m)?,
            Node::BNeg(a) => !self.eval(a, s, m)?,
            Node::BOr(a, b) => self.eval(a, s, m)? || self.eval(b, s, m)?,
            Node::BImp(a, b) => !self.eval(a, s, m)? || self.eval(b, s, m)?,
            Node::BIff(a, b) => self.eval(a, s, m)? == self.eval(b, s, m)?,
            Node::Or(a, b) => self.eval_split(a, b, s, m)?,
            Node::Next(a) => self.eval(a, self.step(s, 1), m)?,
            Node::Future(a) => {
                for k in 0..self.horizon.reach(s as usize) {
                    if self.eval(a, self.step(s, k), m)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::Globally(a) => {
                for k in 0..self.horizon.reach(s as usize) {
                    if !self.eval(a, self.step(s, k), m)? {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Until(a, b) => {
                for k in 0..self.horizon.reach(s as usize) {
                    let sk = self.step(s, k);
                    if self.eval(b, sk, m)? {
                        return Ok(true);
                    }
                    if !self.eval(a, sk, m)? {
                        return Ok(false);
                    }
                }
                false
            }
            Node::Release(a, b) => {
                for k in 0..self.horizon.reach(s as usize) {
                    let sk = self.step(s, k);
                    if !self.eval(b, sk, m)? {
                        return Ok(false);
                    }
                    if self.eval(a, sk, m)? {
                        return Ok(true);
                    }
                }
                true
            }
            Node::Dep(args, t) => {
                let mut seen: HashMap<Vec<bool>, bool> = HashMap::new();
                for i in bits(m) {
                    let mut key = Vec::with_capacity(args.len());
                    for &a in &args {
                        key.push(self.eval(a, s, 1 << i)?);
                    }
                    let v = self.eval(t, s, 1 << i)?;
                    if *seen.entry(key).or_insert(v) != v {
                        return Ok(false);
                    }
                }
                true
            }
            Node::Hook(a, b) => {
                let sel = self.sat_singletons(a, s, m)?;
                self.eval(b, s, sel)?
            }
            Node::SubEx(a) => {
                if self.dc[a as usize] {
                    self.eval(a, s, 0)?
                } else {
                    for sub in submasks(m) {
                        if self.eval(a, s, sub)? {
                            return Ok(true);
                        }
                    }
                    false
                }
            }
            Node::SubAll(a) => {
                if self.dc[a as usize] {
                    self.eval(a, s, m)?
                } else {
                    for sub in submasks(m) {
                        if !self.eval(a, s, sub)? {
                            return Ok(false);
                        }
                    }
                    true
                }
            }
            Node::SingEx(a) => self.sat_singletons(a, s, m)? != 0,
            Node::SingAll(a) => self.sat_singletons(a, s, m)? == m,
            Node::CondSubEx(g, a) => {
                let yes = self.sat_singletons(g, s, m)?;
                let rest = m & !yes;
                if self.dc[a as usize] {
                    self.eval(a, s, rest)?
                } else {
                    for sub in submasks(yes) {
                        if self.eval(a, s, rest | sub)? {
                            return Ok(true);
                        }
                    }
                    false
                }
            }
            Node::CondSubAll(g, a) => {
                let yes = self.sat_singletons(g, s, m)?;
                let rest = m & !yes;
                if self.dc[a as usize] {
                    self.eval(a, s, m)?
                } else {
                    for sub in submasks(yes) {
                        if !self.eval(a, s, rest | sub)? {
                            return Ok(false);
                        }
                    }
                    true
                }
            }
            Node::CondSingEx(g, a) => {
                let yes = self.sat_singletons(g, s, m)?;
                let rest = m & !yes;
                for i in bits(yes) {
                    if self.eval(a, s, rest | 1 << i)? {
                        return Ok(true);
                    }
                }
                false
            }
            Node::CondSingAll(g, a) => {
                let yes = self.sat_singletons(g, s, m)?;
                let rest = m & !yes;
                for i in bits(yes) {
                    if !self.eval(a, s, rest | 1 << i)? {
                        return Ok(false);
                    }
                }
                true
            }
        })
    }

    fn left_order(&self, m: u128, salt: u64) -> Vec<u128> {
        let mut subs: Vec<u128> = submasks(m).collect();
        if let Some(seed) = self.config.shuffle_seed {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ salt ^ (m as u64));
            subs.shuffle(&mut rng);
        }
        subs
    }

    fn eval_split(&mut self, a: Id, b: Id, s: u32, m: u128) -> Result<bool, EvalError> {
        self.stats.splits += 1;
        let exact = self.config.split == SplitMode::Auto
            && (self.dc[a as usize] || self.dc[b as usize]);
        let salt = (a as u64) << 32 | b as u64;
        let lefts: Box<dyn Iterator<Item = u128>> = if self.config.shuffle_seed.is_some() {
            Box::new(self.left_order(m, salt).into_iter())
        } else {
            Box::new(submasks(m))
        };
        for left in lefts {
            if !self.eval(a, s, left)? {
                continue;
            }
            let rest = m & !left;
            if exact {
                if self.eval(b, s, rest)? {
                    return Ok(true);
                }
            } else {
                // the right side covers `rest` and may share any of `left`
                for both in self.left_order(left, salt.rotate_left(17)) {
                    if self.eval(b, s, rest | both)? {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// `T ⊨ φ` with the default configuration.
pub fn check(team: &Team, f: &Formula) -> Result<bool, EvalError> {
    Evaluator::new(team, EvalConfig::default())?.check(f)
}

/// `T ⊨ φ` with statistics.
pub fn check_with(team: &Team, f: &Formula, config: EvalConfig) -> Result<(bool, Stats), EvalError> {
    let mut ev = Evaluator::new(team, config)?;
    let v = ev.check(f)?;
    Ok((v, ev.stats()))
}

/// `(T_γ, T ∖ T_γ)`.
pub fn condition(team: &Team, guard: &Formula) -> Result<(Team, Team), EvalError> {
    let mut ev = Evaluator::new(team, EvalConfig::default())?;
    let (yes, no) = ev.condition(guard)?;
    Ok((team.subteam_mask(yes), team.subteam_mask(no)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;
    use crate::trace::{Alphabet, Label};

    fn ab() -> Alphabet {
        Alphabet::new(["p", "q"]).unwrap()
    }
    fn p() -> Label {
        Label::singleton(0)
    }
    fn e() -> Label {
        Label::EMPTY
    }
    fn lasso(pre: &[Label], cyc: &[Label]) -> LassoTrace {
        LassoTrace::new(pre.to_vec(), cyc.to_vec()).unwrap()
    }
    fn chk(t: &Team, s: &str) -> bool {
        check(t, &parse(s).unwrap()).unwrap()
    }

    #[test]
    fn motivating_example() {
        let t = Team::new(ab(), vec![lasso(&[p()], &[e()]), lasso(&[e(), p()], &[e()])]).unwrap();
        assert!(!chk(&t, "F p"));
        assert!(chk(&t, "F p | F p"));
    }

    #[test]
    fn dependence_not_union_closed() {
        let t = Team::new(ab(), vec![lasso(&[], &[p()]), lasso(&[], &[e()])]).unwrap();
        assert!(!chk(&t, "dep(; p)"));
        for i in 0..2 {
            assert!(chk(&t.subteam([i]), "dep(; p)"));
        }
    }

    #[test]
    fn empty_team() {
        let t = Team::empty(ab());
        for f in ["bot", "p", "F p U q", "!p | G q"] {
            assert!(chk(&t, f), "{f}");
        }
        assert!(!chk(&t, "~p"));
    }

    #[test]
    fn condition_partitions() {
        let t = Team::new(ab(), vec![lasso(&[], &[p()]), lasso(&[], &[e()])]).unwrap();
        let (a, b) = condition(&t, &parse("p").unwrap()).unwrap();
        assert_eq!(a.traces(), &[lasso(&[], &[p()])]);
        assert_eq!(b.len(), 1);
        let (a, b) = condition(&t, &Formula::Top).unwrap();
        assert!(a.same_set(&t) && b.is_empty());
    }

    #[test]
    fn unknown_prop_and_budget() {
        let t = Team::new(ab(), vec![lasso(&[], &[p()])]).unwrap();
        assert_eq!(
            check(&t, &parse("z").unwrap()),
            Err(EvalError::UnknownProposition("z".into()))
        );
        let traces = (0..10)
            .map(|i| lasso(&vec![e(); i], &[p()]))
            .collect();
        let big = Team::new(ab(), traces).unwrap();
        let f = parse("~(F p | F p) | ~(F q | p)").unwrap();
        let cfg = EvalConfig {
            budget: 1000,
            ..Default::default()
        };
        assert!(matches!(
            check_with(&big, &f, cfg),
            Err(EvalError::BudgetExceeded(1000))
        ));
    }

    #[test]
    fn submask_order() {
        let v: Vec<u128> = submasks(0b1010).collect();
        assert_eq!(v, vec![0, 2, 8, 10]);
        assert_eq!(submasks(0).count(), 1);
    }
}
