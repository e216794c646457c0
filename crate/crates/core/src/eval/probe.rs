//! Sampling probes for closure properties and equivalences.

use super::{EvalConfig, EvalError, Evaluator};
use crate::formula::Formula;
use crate::team::Team;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProbeOutcome<C> {
    Counterexample(C),
    /// The sampler was exhausted without finding a counterexample.
    NoneFound { samples: usize },
    /// Sample or evaluation budget ran out first.
    BudgetExhausted { samples: usize },
}

impl<C> ProbeOutcome<C> {
    pub fn counterexample(&self) -> Option<&C> {
        match self {
            ProbeOutcome::Counterexample(c) => Some(c),
            _ => None,
        }
    }

    pub fn found(&self) -> bool {
        matches!(self, ProbeOutcome::Counterexample(_))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ProbeBudget {
    pub max_samples: usize,
    pub eval: EvalConfig,
}

impl Default for ProbeBudget {
    fn default() -> Self {
        ProbeBudget {
            max_samples: 10_000,
            eval: EvalConfig::default(),
        }
    }
}

/// `T ⊨ φ` but a subteam `T′ ⊭ φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubteamWitness {
    pub team: Team,
    pub subteam: Team,
}

/// `T₁ ⊨ φ`, `T₂ ⊨ φ` but `T₁ ∪ T₂ ⊭ φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnionWitness {
    pub left: Team,
    pub right: Team,
    pub union: Team,
}

/// Drive `test` over sampled teams; budget errors end the probe quietly.
fn run<C, I, F>(sampler: I, budget: ProbeBudget, mut test: F) -> Result<ProbeOutcome<C>, EvalError>
where
    I: IntoIterator<Item = Team>,
    F: FnMut(&Team) -> Result<Option<C>, EvalError>,
{
    let mut it = sampler.into_iter().peekable();
    let mut samples = 0;
    while it.peek().is_some() {
        if samples >= budget.max_samples {
            return Ok(ProbeOutcome::BudgetExhausted { samples });
        }
        let t = it.next().unwrap();
        samples += 1;
        match test(&t) {
            Ok(Some(c)) => return Ok(ProbeOutcome::Counterexample(c)),
            Ok(None) => {}
            Err(EvalError::BudgetExceeded(_)) => {
                return Ok(ProbeOutcome::BudgetExhausted { samples })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ProbeOutcome::NoneFound { samples })
}

fn subsets(m: u128) -> impl Iterator<Item = u128> {
    let mut cur = Some(0u128);
    std::iter::from_fn(move || {
        let s = cur?;
        cur = if s == m { None } else { Some(s.wrapping_sub(m) & m) };
        Some(s)
    })
}

pub fn probe_downward_closed<I: IntoIterator<Item = Team>>(
    phi: &Formula,
    sampler: I,
    budget: ProbeBudget,
) -> Result<ProbeOutcome<SubteamWitness>, EvalError> {
    run(sampler, budget, |t| {
        let mut ev = Evaluator::new(t, budget.eval)?;
        let full = ev.full_mask();
        if !ev.check(phi)? {
            return Ok(None);
        }
        for sub in subsets(full) {
            if !ev.check_at(phi, 0, sub)? {
                return Ok(Some(SubteamWitness {
                    team: t.clone(),
                    subteam: t.subteam_mask(sub),
                }));
            }
        }
        Ok(None)
    })
}

pub fn probe_union_closed<I: IntoIterator<Item = Team>>(
    phi: &Formula,
    sampler: I,
    budget: ProbeBudget,
) -> Result<ProbeOutcome<UnionWitness>, EvalError> {
    run(sampler, budget, |t| {
        let mut ev = Evaluator::new(t, budget.eval)?;
        let full = ev.full_mask();
        if ev.check(phi)? {
            return Ok(None);
        }
        for a in subsets(full) {
            if !ev.check_at(phi, 0, a)? {
                continue;
            }
            for x in subsets(a) {
                let b = (full & !a) | x;
                if ev.check_at(phi, 0, b)? {
                    return Ok(Some(UnionWitness {
                        left: t.subteam_mask(a),
                        right: t.subteam_mask(b),
                        union: t.clone(),
                    }));
                }
            }
        }
        Ok(None)
    })
}

/// Counterexample: a team where `T ⊨ φ` differs from `∀t ∈ T: {t} ⊨ φ`.
pub fn probe_flat<I: IntoIterator<Item = Team>>(
    phi: &Formula,
    sampler: I,
    budget: ProbeBudget,
) -> Result<ProbeOutcome<Team>, EvalError> {
    run(sampler, budget, |t| {
        let mut ev = Evaluator::new(t, budget.eval)?;
        let whole = ev.check(phi)?;
        let mut each = true;
        for i in 0..t.len() {
            each &= ev.check_at(phi, 0, 1 << i)?;
        }
        Ok((whole != each).then(|| t.clone()))
    })
}

pub fn equiv_check<I: IntoIterator<Item = Team>>(
    phi: &Formula,
    psi: &Formula,
    sampler: I,
    budget: ProbeBudget,
) -> Result<ProbeOutcome<Team>, EvalError> {
    run(sampler, budget, |t| {
        let mut ev = Evaluator::new(t, budget.eval)?;
        Ok((ev.check(phi)? != ev.check(psi)?).then(|| t.clone()))
    })
}
