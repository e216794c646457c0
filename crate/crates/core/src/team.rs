//! Finite teams of lasso traces.

use std::collections::HashSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::trace::{Alphabet, Label, LassoTrace, TraceError, TraceLiteral, MAX_PROPS};

/// Loop lcm above this bound is rejected.
pub const MAX_PERIOD: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TeamError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("trace {0} uses propositions outside the alphabet")]
    LabelOutOfAlphabet(usize),
    #[error("horizon overflow: loop lcm exceeds {MAX_PERIOD}")]
    HorizonOverflow,
    #[error("snapshot needs {0} propositions, cap is {MAX_PROPS}")]
    SnapshotOverflow(usize),
}

/// Search bound for synchronous evaluation: `H = P + L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Horizon {
    pub prefix: usize,
    pub period: usize,
}

impl Horizon {
    pub fn total(&self) -> usize {
        self.prefix + self.period
    }

    /// Representative of position `k` in `[0, H)`.
    #[inline]
    pub fn canonical(&self, k: usize) -> usize {
        if k < self.prefix {
            k
        } else {
            self.prefix + (k - self.prefix) % self.period
        }
    }

    /// Number of distinct canonical positions reachable from `s`.
    #[inline]
    pub fn reach(&self, s: usize) -> usize {
        if s < self.prefix {
            self.prefix - s + self.period
        } else {
            self.period
        }
    }
}

/// A finite set of normalized lassos over a declared alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Team {
    alphabet: Alphabet,
    traces: Vec<LassoTrace>,
}

impl Team {
    /// Normalizes and deduplicates, keeping the first occurrence of each trace.
    pub fn new(alphabet: Alphabet, traces: Vec<LassoTrace>) -> Result<Self, TeamError> {
        let mut seen = HashSet::new();
        let mut out = Vec::with_capacity(traces.len());
        for (i, t) in traces.into_iter().enumerate() {
            if t.support().width() > alphabet.len() {
                return Err(TeamError::LabelOutOfAlphabet(i));
            }
            let n = t.normalize();
            if seen.insert(n.clone()) {
                out.push(n);
            }
        }
        Ok(Team {
            alphabet,
            traces: out,
        })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Team {
            alphabet,
            traces: vec![],
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn traces(&self) -> &[LassoTrace] {
        &self.traces
    }

    pub fn len(&self) -> usize {
        self.traces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.traces.is_empty()
    }

    /// Subteam selected by base indices.
    pub fn subteam(&self, idx: impl IntoIterator<Item = usize>) -> Team {
        let traces = idx.into_iter().map(|i| self.traces[i].clone()).collect();
        Team::new(self.alphabet.clone(), traces).expect("subteam of a valid team")
    }

    /// Subteam selected by a bitmask over base indices.
    pub fn subteam_mask(&self, mask: u128) -> Team {
        self.subteam((0..self.len()).filter(|&i| mask >> i & 1 == 1))
    }

    pub fn union(&self, other: &Team) -> Team {
        let mut traces = self.traces.clone();
        traces.extend(other.traces.iter().cloned());
        Team::new(self.alphabet.clone(), traces).expect("same alphabet")
    }

    /// Set equality of the trace sets.
    pub fn same_set(&self, other: &Team) -> bool {
        let a: HashSet<_> = self.traces.iter().collect();
        let b: HashSet<_> = other.traces.iter().collect();
        a == b
    }

    pub fn contains(&self, t: &LassoTrace) -> bool {
        let n = t.normalize();
        self.traces.contains(&n)
    }

    pub fn horizon(&self) -> Result<Horizon, TeamError> {
        let mut prefix = 0;
        let mut period = 1usize;
        for t in &self.traces {
            prefix = prefix.max(t.prefix().len());
            period = period.lcm(&t.cycle().len());
            if period > MAX_PERIOD {
                return Err(TeamError::HorizonOverflow);
            }
        }
        Ok(Horizon { prefix, period })
    }

    pub fn canonical_shift(&self, k: usize) -> Result<usize, TeamError> {
        Ok(self.horizon()?.canonical(k))
    }

    /// `T^k`, deduplicated.
    pub fn suffix(&self, k: usize) -> Team {
        let traces = self.traces.iter().map(|t| t.suffix(k)).collect();
        Team::new(self.alphabet.clone(), traces).expect("suffix stays in alphabet")
    }

    /// Snapshot trace over the product alphabet: bit `i·|Φ| + p` means `p ∈ t_i`.
    pub fn snapshot(&self) -> Result<Snapshot, TeamError> {
        let width = self.alphabet.len() * self.len();
        if width > MAX_PROPS {
            return Err(TeamError::SnapshotOverflow(width));
        }
        let h = self.horizon()?;
        let props = self.alphabet.len();
        let column = |k: usize| {
            let mut l = Label::EMPTY;
            for (i, t) in self.traces.iter().enumerate() {
                for p in t.at(k).iter() {
                    l.insert(i * props + p);
                }
            }
            l
        };
        let prefix = (0..h.prefix).map(column).collect();
        let cycle = (h.prefix..h.total()).map(column).collect();
        Ok(Snapshot {
            props,
            size: self.len(),
            trace: LassoTrace::new(prefix, cycle)?.normalize(),
        })
    }

    pub fn to_file(&self) -> TeamFile {
        TeamFile {
            alphabet: self.alphabet.names().to_vec(),
            traces: self
                .traces
                .iter()
                .map(|t| t.to_literal(&self.alphabet))
                .collect(),
        }
    }

    pub fn from_file(f: &TeamFile) -> Result<Self, TeamError> {
        let alphabet = Alphabet::new(f.alphabet.iter().cloned())?;
        let traces = f
            .traces
            .iter()
            .map(|l| LassoTrace::from_literal(l, &alphabet))
            .collect::<Result<Vec<_>, _>>()?;
        Team::new(alphabet, traces)
    }

    pub fn display(&self) -> String {
        let parts: Vec<String> = self
            .traces
            .iter()
            .map(|t| t.display(&self.alphabet))
            .collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// The snapshot trace of a team together with its product layout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub props: usize,
    pub size: usize,
    pub trace: LassoTrace,
}

impl Snapshot {
    /// Split a snapshot-shaped trace back into per-trace lassos.
    pub fn split(&self, trace: &LassoTrace) -> Vec<LassoTrace> {
        (0..self.size)
            .map(|i| {
                let proj = |l: &Label| {
                    Label::from_indices(
                        (0..self.props).filter(|&p| l.contains(i * self.props + p)),
                    )
                };
                LassoTrace::new(
                    trace.prefix().iter().map(proj).collect(),
                    trace.cycle().iter().map(proj).collect(),
                )
                .expect("non-empty loop")
                .normalize()
            })
            .collect()
    }

    /// Display names `p@i` for the product alphabet.
    pub fn alphabet(&self, base: &Alphabet) -> Alphabet {
        let mut names = vec![];
        for i in 0..self.size {
            for p in 0..self.props {
                names.push(format!("{}@{}", base.name(p), i));
            }
        }
        Alphabet::new(names).expect("product names are distinct")
    }
}

/// JSON form of a team file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeamFile {
    pub alphabet: Vec<String>,
    pub traces: Vec<TraceLiteral>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["p"]).unwrap()
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

    #[test]
    fn suffix_examples() {
        let t = Team::new(ab(), vec![lasso(&[e(), p()], &[e()]), lasso(&[p()], &[e()])]).unwrap();
        let s = t.suffix(1);
        let want = Team::new(ab(), vec![lasso(&[p()], &[e()]), lasso(&[], &[e()])]).unwrap();
        assert!(s.same_set(&want));
        assert!(t.suffix(0).same_set(&t));
        let t = Team::new(ab(), vec![lasso(&[], &[p(), e()]), lasso(&[], &[e(), p()])]).unwrap();
        assert_eq!(t.suffix(1).len(), 2);
        assert!(t.suffix(1).same_set(&t));
    }

    #[test]
    fn horizon_examples() {
        let t = Team::new(
            ab(),
            vec![lasso(&[p()], &[p(), e()]), lasso(&[], &[p(), e(), e()])],
        )
        .unwrap();
        let h = t.horizon().unwrap();
        assert_eq!((h.prefix, h.period, h.total()), (1, 6, 7));
        let h = Team::empty(ab()).horizon().unwrap();
        assert_eq!((h.prefix, h.period, h.total()), (0, 1, 1));
        let t = Team::new(ab(), vec![lasso(&[e(), e(), e(), p()], &[e(), p(), e(), e(), e()])])
            .unwrap();
        assert_eq!(t.horizon().unwrap().total(), 9);
        let h = Horizon { prefix: 2, period: 3 };
        assert_eq!(h.canonical(9), 3);
        assert_eq!(h.canonical(1), 1);
    }

    #[test]
    fn horizon_overflow() {
        // pairwise coprime loop lengths with a huge lcm
        let primes = [101, 103, 107, 109];
        let traces = primes
            .iter()
            .map(|&n| {
                let mut c = vec![e(); n];
                c[0] = p();
                lasso(&[], &c)
            })
            .collect();
        let t = Team::new(ab(), traces).unwrap();
        assert_eq!(t.horizon(), Err(TeamError::HorizonOverflow));
    }

    #[test]
    fn snapshot_examples() {
        let t = Team::new(ab(), vec![lasso(&[], &[p()])]).unwrap();
        let s = t.snapshot().unwrap();
        assert_eq!(s.trace, lasso(&[], &[Label::singleton(0)]));
        let s = Team::empty(Alphabet::empty()).snapshot().unwrap();
        assert_eq!(s.trace, lasso(&[], &[e()]));
    }

    #[test]
    fn dedup_and_alphabet_check() {
        let t = Team::new(ab(), vec![lasso(&[p()], &[p()]), lasso(&[], &[p()])]).unwrap();
        assert_eq!(t.len(), 1);
        let bad = Team::new(ab(), vec![lasso(&[], &[Label::singleton(3)])]);
        assert_eq!(bad, Err(TeamError::LabelOutOfAlphabet(0)));
    }

    #[test]
    fn file_round_trip() {
        let json = r#"{"alphabet":["p","q"],"traces":[{"prefix":[["p"],[]],"loop":[["q"]]}]}"#;
        let f: TeamFile = serde_json::from_str(json).unwrap();
        let t = Team::from_file(&f).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(Team::from_file(&t.to_file()).unwrap(), t);
    }
}
