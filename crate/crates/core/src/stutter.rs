//! Team stuttering: canonical stutter-free teams, equivalence and expansion.
//!
//! Everything goes through the snapshot trace, whose columns record the
//! labels of all traces at one position. Position `i` stutters iff
//! `col(i) = col(i+1)` and the suffix from `i` is not constant.

use num_integer::Integer;
use rand::Rng;
use thiserror::Error;

use crate::team::{Team, TeamError};
use crate::trace::{Label, LassoTrace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StutterError {
    #[error(transparent)]
    Team(#[from] TeamError),
    #[error("stutter spec misaligned: {0}")]
    Misaligned(String),
    #[error("teams are over different alphabets")]
    AlphabetMismatch,
}

/// Column multiplicities describing a stuttering function.
///
/// Block `k` has length `prefix[k]` for `k < |prefix|` and `cycle[(k − |prefix|) mod |cycle|]`
/// afterwards; `f(k)` is the start of block `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StutterSpec {
    pub prefix: Vec<usize>,
    pub cycle: Vec<usize>,
}

impl StutterSpec {
    /// The identity on the snapshot layout of `team`.
    pub fn identity(team: &Team) -> Result<Self, StutterError> {
        let s = team.snapshot()?;
        Ok(StutterSpec {
            prefix: vec![1; s.trace.prefix().len()],
            cycle: vec![1; s.trace.cycle().len()],
        })
    }

    fn well_formed(&self) -> bool {
        !self.cycle.is_empty() && self.prefix.iter().chain(&self.cycle).all(|&m| m >= 1)
    }

    fn block(&self, k: usize) -> usize {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.cycle[(k - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// `f(0), f(1), …` up to `count` values.
    pub fn starts(&self, count: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(count);
        let mut x = 0;
        for k in 0..count {
            out.push(x);
            x += self.block(k);
        }
        out
    }
}

/// Stuttering positions among the representatives `0..P+L` of the normalized snapshot.
pub fn stuttering_positions(team: &Team) -> Result<Vec<usize>, StutterError> {
    let s = team.snapshot()?.trace;
    Ok(positions(&s))
}

fn positions(s: &LassoTrace) -> Vec<usize> {
    let (p, l) = (s.prefix().len(), s.cycle().len());
    let mut out: Vec<usize> = (0..p).filter(|&i| s.at(i) == s.at(i + 1)).collect();
    if l >= 2 {
        out.extend((p..p + l).filter(|&i| s.at(i) == s.at(i + 1)));
    }
    out
}

/// Delete stuttering columns of a normalized snapshot lasso.
fn destutter(s: &LassoTrace) -> LassoTrace {
    let (p, l) = (s.prefix().len(), s.cycle().len());
    let prefix: Vec<Label> = (0..p)
        .filter(|&i| s.at(i) != s.at(i + 1))
        .map(|i| s.at(i))
        .collect();
    let cycle: Vec<Label> = if l == 1 {
        s.cycle().to_vec()
    } else {
        (p..p + l)
            .filter(|&i| s.at(i) != s.at(i + 1))
            .map(|i| s.at(i))
            .collect()
    };
    LassoTrace::new(prefix, cycle)
        .expect("a loop of minimal period ≥ 2 keeps a column")
        .normalize()
}

/// The unique stutter-free team stutter-equivalent to `team`.
pub fn canonical_stutter_free(team: &Team) -> Result<Team, StutterError> {
    let snap = team.snapshot()?;
    let reduced = destutter(&snap.trace);
    Ok(Team::new(team.alphabet().clone(), snap.split(&reduced))?)
}

pub fn is_stutter_free(team: &Team) -> Result<bool, StutterError> {
    Ok(stuttering_positions(team)?.is_empty())
}

pub fn stutter_equivalent(a: &Team, b: &Team) -> Result<bool, StutterError> {
    if a.alphabet() != b.alphabet() {
        return Err(StutterError::AlphabetMismatch);
    }
    Ok(canonical_stutter_free(a)?.same_set(&canonical_stutter_free(b)?))
}

/// Is the function described by `spec` a stuttering function of every trace in `team`?
pub fn is_stuttering_function(spec: &StutterSpec, team: &Team) -> Result<bool, StutterError> {
    if !spec.well_formed() {
        return Ok(false);
    }
    let s = team.snapshot()?.trace;
    let a: usize = spec.prefix.iter().sum();
    let b: usize = spec.cycle.iter().sum();
    // beyond max(A, P_s) the joint pattern repeats with period lcm(B, L_s)
    let bound = a.max(s.prefix().len()) + b + b.lcm(&s.cycle().len());
    let mut x = 0;
    let mut k = 0;
    while x < bound {
        let len = spec.block(k);
        let c = s.at(x);
        if (x + 1..x + len).any(|y| s.at(y) != c) {
            return Ok(false);
        }
        x += len;
        k += 1;
    }
    Ok(true)
}

/// Insert duplicate columns so that `expand(T, f)[f] = T`.
///
/// `spec` is laid over the normalized snapshot of `team`: it needs at least
/// `P_s` prefix entries and a loop length that is a multiple of `L_s`.
pub fn expand(team: &Team, spec: &StutterSpec) -> Result<Team, StutterError> {
    let snap = team.snapshot()?;
    let s = &snap.trace;
    let (ps, ls) = (s.prefix().len(), s.cycle().len());
    if !spec.well_formed() {
        return Err(StutterError::Misaligned(
            "multiplicities must be ≥ 1 and the loop non-empty".into(),
        ));
    }
    if spec.prefix.len() < ps || spec.cycle.len() % ls != 0 {
        return Err(StutterError::Misaligned(format!(
            "snapshot has prefix {ps} and loop {ls}, spec has prefix {} and loop {}",
            spec.prefix.len(),
            spec.cycle.len()
        )));
    }
    let rep = |start: usize, mults: &[usize]| -> Vec<Label> {
        mults
            .iter()
            .enumerate()
            .flat_map(|(j, &m)| std::iter::repeat(s.at(start + j)).take(m))
            .collect()
    };
    let prefix = rep(0, &spec.prefix);
    let cycle = rep(spec.prefix.len(), &spec.cycle);
    let lasso = LassoTrace::new(prefix, cycle).expect("non-empty loop");
    Ok(Team::new(team.alphabet().clone(), snap.split(&lasso))?)
}

/// A random spec aligned to `team`'s snapshot, for property tests.
pub fn random_spec<R: Rng>(rng: &mut R, team: &Team) -> Result<StutterSpec, StutterError> {
    let s = team.snapshot()?.trace;
    let p = s.prefix().len() + rng.gen_range(0..=2);
    let l = s.cycle().len() * rng.gen_range(1..=2);
    Ok(StutterSpec {
        prefix: (0..p).map(|_| rng.gen_range(1..=3)).collect(),
        cycle: (0..l).map(|_| rng.gen_range(1..=3)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::Alphabet;

    fn ab() -> Alphabet {
        Alphabet::new(["p", "q", "z"]).unwrap()
    }
    fn lab(names: &[&str]) -> Label {
        ab().label(names).unwrap()
    }
    fn single(pre: &[&[&str]], cyc: &[&[&str]]) -> Team {
        let t = LassoTrace::new(
            pre.iter().map(|n| lab(n)).collect(),
            cyc.iter().map(|n| lab(n)).collect(),
        )
        .unwrap();
        Team::new(ab(), vec![t]).unwrap()
    }

    #[test]
    fn single_trace_canon() {
        let t = single(&[&["p"], &["p"], &["q"]], &[&["z"]]);
        let c = canonical_stutter_free(&t).unwrap();
        assert!(c.same_set(&single(&[&["p"], &["q"]], &[&["z"]])));
        let t = single(&[&["p"]], &[&["p"]]);
        assert!(stuttering_positions(&t).unwrap().is_empty());
        assert!(canonical_stutter_free(&t).unwrap().same_set(&single(&[], &[&["p"]])));
    }

    #[test]
    fn equivalences() {
        let a = single(&[&["p"], &["p"], &["q"]], &[&["z"]]);
        let b = single(&[&["p"], &["q"], &["q"]], &[&["z"]]);
        let c = single(&[&["p"]], &[&["z"]]);
        assert!(stutter_equivalent(&a, &b).unwrap());
        assert!(!stutter_equivalent(&a, &c).unwrap());
    }

    #[test]
    fn expand_examples() {
        let t = single(&[&["p"]], &[&["q"]]);
        let id = StutterSpec::identity(&t).unwrap();
        assert_eq!(expand(&t, &id).unwrap(), t);
        let dup = StutterSpec {
            prefix: vec![2],
            cycle: vec![1],
        };
        let e = expand(&t, &dup).unwrap();
        assert!(e.same_set(&single(&[&["p"], &["p"]], &[&["q"]])));
        assert!(is_stuttering_function(&dup, &e).unwrap());
        let bad = StutterSpec {
            prefix: vec![],
            cycle: vec![1],
        };
        assert!(matches!(expand(&t, &bad), Err(StutterError::Misaligned(_))));
    }

    #[test]
    fn loop_collapse() {
        // (p p q q)^ω collapses to (p q)^ω
        let t = single(&[], &[&["p"], &["p"], &["q"], &["q"]]);
        let c = canonical_stutter_free(&t).unwrap();
        assert!(c.same_set(&single(&[], &[&["p"], &["q"]])));
    }
}
