//! Finite serial rooted Kripke structures and their lasso traces.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{conj, split_disj, Formula};
use crate::trace::{Alphabet, Label, LassoTrace, TraceError};

/// Default cap on the number of traces (and frontier words) during enumeration.
pub const ENUM_CAP: usize = 200_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KripkeError {
    #[error("structure has no states")]
    NoStates,
    #[error("state {0} has no successor")]
    NotSerial(usize),
    #[error("root {0} is not a state")]
    BadRoot(usize),
    #[error("edge ({0}, {1}) refers to a missing state")]
    BadEdge(usize, usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("state {state}: {source}")]
    Label { state: usize, source: TraceError },
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("enumeration exceeded the cap of {0}")]
    OutputCap(usize),
}

/// `(W, R, η, r)` with `W = 0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Kripke {
    alphabet: Alphabet,
    succ: Vec<Vec<usize>>,
    labels: Vec<Label>,
    root: usize,
}

/// JSON structure file. `alphabet` is optional; by default it is collected
/// from the labels in order of first occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KripkeFile {
    pub states: usize,
    pub edges: Vec<[usize; 2]>,
    pub labels: Vec<Vec<String>>,
    #[serde(default)]
    pub root: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<Vec<String>>,
}

/// Whether `T(K)` contains only ultimately periodic traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Countability {
    AllUlp,
    Uncountable,
}

impl Kripke {
    /// Builds and validates; returns the first problem found.
    pub fn new(
        alphabet: Alphabet,
        states: usize,
        edges: &[(usize, usize)],
        labels: Vec<Label>,
        root: usize,
    ) -> Result<Self, KripkeError> {
        match diagnose(&alphabet, states, edges, &labels, root).into_iter().next() {
            Some(e) => Err(e),
            None => Ok(Self::assemble(alphabet, states, edges, labels, root)),
        }
    }

    fn assemble(
        alphabet: Alphabet,
        states: usize,
        edges: &[(usize, usize)],
        labels: Vec<Label>,
        root: usize,
    ) -> Self {
        let mut succ = vec![vec![]; states];
        for &(a, b) in edges {
            if !succ[a].contains(&b) {
                succ[a].push(b);
            }
        }
        for s in &mut succ {
            s.sort_unstable();
        }
        Kripke {
            alphabet,
            succ,
            labels,
            root,
        }
    }

    pub fn from_file(f: &KripkeFile) -> Result<Self, KripkeError> {
        let (alphabet, labels, edges) = file_parts(f)?;
        Self::new(alphabet, f.states, &edges, labels, f.root)
    }

    pub fn to_file(&self) -> KripkeFile {
        KripkeFile {
            states: self.len(),
            edges: self.edges().into_iter().map(|(a, b)| [a, b]).collect(),
            labels: self
                .labels
                .iter()
                .map(|l| self.alphabet.label_names(l))
                .collect(),
            root: self.root,
            alphabet: Some(self.alphabet.names().to_vec()),
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.succ.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.is_empty()
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn label(&self, w: usize) -> Label {
        self.labels[w]
    }

    pub fn successors(&self, w: usize) -> &[usize] {
        &self.succ[w]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Does some path from the root induce `t`?
    pub fn trace_member(&self, t: &LassoTrace) -> bool {
        let t = t.normalize();
        let span = t.span();
        let p = t.prefix().len();
        let next = |c: usize| if c + 1 < span { c + 1 } else { p };
        if self.labels[self.root] != t.at(0) {
            return false;
        }
        let id = |w: usize, c: usize| w * span + c;
        let step = |w: usize, c: usize| {
            let c2 = next(c);
            let want = t.at(c2);
            self.succ[w]
                .iter()
                .filter(move |&&v| self.labels[v] == want)
                .map(move |&v| (v, c2))
        };
        // DFS from (root, 0); a back edge is a reachable cycle, i.e. an infinite path
        // 0 = new, 1 = on stack, 2 = done
        let mut color = vec![0u8; self.len() * span];
        color[id(self.root, 0)] = 1;
        let mut stack = vec![((self.root, 0), step(self.root, 0).collect::<Vec<_>>(), 0)];
        while let Some((node, outs, pos)) = stack.last_mut() {
            if *pos < outs.len() {
                let (v, c) = outs[*pos];
                *pos += 1;
                match color[id(v, c)] {
                    1 => return true,
                    0 => {
                        color[id(v, c)] = 1;
                        let o = step(v, c).collect();
                        stack.push(((v, c), o, 0));
                    }
                    _ => {}
                }
            } else {
                color[id(node.0, node.1)] = 2;
                stack.pop();
            }
        }
        false
    }

    /// Normalized member lassos with prefix ≤ `max_prefix` and loop ≤ `max_loop`, sorted.
    pub fn enumerate_ulp_traces(
        &self,
        max_prefix: usize,
        max_loop: usize,
    ) -> Result<Vec<LassoTrace>, KripkeError> {
        self.enumerate_ulp_traces_capped(max_prefix, max_loop, ENUM_CAP)
    }

    pub fn enumerate_ulp_traces_capped(
        &self,
        max_prefix: usize,
        max_loop: usize,
        cap: usize,
    ) -> Result<Vec<LassoTrace>, KripkeError> {
        let mut out = BTreeSet::new();
        if max_loop == 0 {
            return Ok(vec![]);
        }
        // label words of paths from the root, with their possible end states
        let mut frontier: HashMap<Vec<Label>, BTreeSet<usize>> = HashMap::new();
        frontier.insert(vec![self.labels[self.root]], BTreeSet::from([self.root]));
        for len in 1..=max_prefix + max_loop {
            for word in frontier.keys() {
                for lp in 1..=max_loop.min(len) {
                    let pre = len - lp;
                    if pre > max_prefix {
                        continue;
                    }
                    let cand = LassoTrace::new(word[..pre].to_vec(), word[pre..].to_vec())
                        .expect("loop non-empty")
                        .normalize();
                    if cand.prefix().len() <= max_prefix
                        && cand.cycle().len() <= max_loop
                        && !out.contains(&cand)
                        && self.trace_member(&cand)
                    {
                        out.insert(cand);
                        if out.len() > cap {
                            return Err(KripkeError::OutputCap(cap));
                        }
                    }
                }
            }
            if len == max_prefix + max_loop {
                break;
            }
            let mut grown: HashMap<Vec<Label>, BTreeSet<usize>> = HashMap::new();
            for (word, ends) in &frontier {
                for &w in ends {
                    for &v in &self.succ[w] {
                        let mut nw = word.clone();
                        nw.push(self.labels[v]);
                        grown.entry(nw).or_default().insert(v);
                    }
                }
                if grown.len() > cap {
                    return Err(KripkeError::OutputCap(cap));
                }
            }
            frontier = grown;
        }
        Ok(out.into_iter().collect())
    }

    /// `K′` with fresh propositions `@pw_i`, and the characteristic formula `χ_K`.
    pub fn chi_formula(&self) -> Result<(Kripke, Formula), KripkeError> {
        let n = self.len();
        let base = self.alphabet.len();
        let pw: Vec<String> = (0..n).map(|i| format!("@pw_{i}")).collect();
        let alphabet = self.alphabet.extended(pw.iter().cloned())?;
        let labels = (0..n)
            .map(|w| {
                let mut l = self.labels[w];
                l.insert(base + w);
                l
            })
            .collect();
        let k2 = Kripke {
            alphabet,
            succ: self.succ.clone(),
            labels,
            root: self.root,
        };
        let p = |w: usize| Formula::prop(pw[w].clone());
        let state = |w: usize| {
            let l = self.labels[w];
            let own = std::iter::once(p(w));
            let others = (0..n).filter(|&v| v != w).map(|v| p(v).neg());
            let pos = (0..base)
                .filter(|&q| l.contains(q))
                .map(|q| Formula::prop(self.alphabet.name(q)));
            let neg = (0..base)
                .filter(|&q| !l.contains(q))
                .map(|q| Formula::prop(self.alphabet.name(q)).neg());
            let step = split_disj(self.succ[w].iter().map(|&v| p(v).next()));
            conj(own.chain(others).chain(pos).chain(neg).chain([step]))
        };
        let chi = p(self.root).and(split_disj((0..n).map(state)).globally());
        Ok((k2, chi))
    }

    /// Exact test via the subset automaton: the traces are its infinite runs,
    /// which are countably many iff no reachable SCC branches.
    pub fn countability_class(&self) -> Countability {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut nodes: Vec<Vec<usize>> = vec![];
        let mut succ: Vec<Vec<usize>> = vec![];
        ids.insert(vec![self.root], 0);
        nodes.push(vec![self.root]);
        let mut i = 0;
        while i < nodes.len() {
            let mut by_label: HashMap<Label, BTreeSet<usize>> = HashMap::new();
            for &w in &nodes[i] {
                for &v in &self.succ[w] {
                    by_label.entry(self.labels[v]).or_default().insert(v);
                }
            }
            let mut out = vec![];
            for set in by_label.into_values() {
                let key: Vec<usize> = set.into_iter().collect();
                let id = *ids.entry(key.clone()).or_insert_with(|| {
                    nodes.push(key);
                    nodes.len() - 1
                });
                out.push(id);
            }
            succ.push(out);
            i += 1;
        }
        let comp = scc(&succ);
        for (a, outs) in succ.iter().enumerate() {
            if outs.iter().filter(|&&b| comp[b] == comp[a]).count() >= 2 {
                return Countability::Uncountable;
            }
        }
        Countability::AllUlp
    }
}

/// All validation problems, each naming the offending state or edge.
pub fn validate_file(f: &KripkeFile) -> Vec<KripkeError> {
    match file_parts(f) {
        Ok((alphabet, labels, edges)) => diagnose(&alphabet, f.states, &edges, &labels, f.root),
        Err(e) => vec![e],
    }
}

fn file_parts(f: &KripkeFile) -> Result<(Alphabet, Vec<Label>, Vec<(usize, usize)>), KripkeError> {
    let alphabet = match &f.alphabet {
        Some(names) => Alphabet::new(names.iter().cloned())?,
        None => {
            let mut names: Vec<String> = vec![];
            for l in &f.labels {
                for p in l {
                    if !names.contains(p) {
                        names.push(p.clone());
                    }
                }
            }
            Alphabet::new(names)?
        }
    };
    let labels = f
        .labels
        .iter()
        .enumerate()
        .map(|(state, l)| {
            alphabet
                .label(l.iter().map(String::as_str))
                .map_err(|source| KripkeError::Label { state, source })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let edges = f.edges.iter().map(|e| (e[0], e[1])).collect();
    Ok((alphabet, labels, edges))
}

fn diagnose(
    alphabet: &Alphabet,
    states: usize,
    edges: &[(usize, usize)],
    labels: &[Label],
    root: usize,
) -> Vec<KripkeError> {
    let mut errs = vec![];
    if states == 0 {
        errs.push(KripkeError::NoStates);
    }
    if root >= states && states > 0 {
        errs.push(KripkeError::BadRoot(root));
    }
    if labels.len() != states {
        errs.push(KripkeError::LabelCount {
            expected: states,
            got: labels.len(),
        });
    }
    for (state, l) in labels.iter().enumerate() {
        if l.width() > alphabet.len() {
            errs.push(KripkeError::Label {
                state,
                source: TraceError::UnknownProp(format!("#{}", l.width() - 1)),
            });
        }
    }
    let mut has_succ = vec![false; states];
    for &(a, b) in edges {
        if a >= states || b >= states {
            errs.push(KripkeError::BadEdge(a, b));
        } else {
            has_succ[a] = true;
        }
    }
    errs.extend(
        has_succ
            .iter()
            .enumerate()
            .filter(|(_, &s)| !s)
            .map(|(w, _)| KripkeError::NotSerial(w)),
    );
    errs
}

/// Tarjan's SCC labelling, iterative.
fn scc(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on = vec![false; n];
    let mut comp = vec![usize::MAX; n];
    let mut stack = vec![];
    let mut counter = 0;
    let mut ncomp = 0;
    for s in 0..n {
        if index[s] != usize::MAX {
            continue;
        }
        let mut call = vec![(s, 0usize)];
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos == 0 && index[v] == usize::MAX {
                index[v] = counter;
                low[v] = counter;
                counter += 1;
                stack.push(v);
                on[v] = true;
            }
            if *pos < succ[v].len() {
                let u = succ[v][*pos];
                *pos += 1;
                if index[u] == usize::MAX {
                    call.push((u, 0));
                } else if on[u] {
                    low[v] = low[v].min(index[u]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    loop {
                        let x = stack.pop().expect("tarjan stack");
                        on[x] = false;
                        comp[x] = ncomp;
                        if x == v {
                            break;
                        }
                    }
                    ncomp += 1;
                }
            }
        }
    }
    comp
}

/// Distinct label words from the root of length `n`, used by tests as an oracle.
pub fn path_words(k: &Kripke, n: usize) -> HashSet<Vec<Label>> {
    let mut cur: HashSet<(Vec<Label>, usize)> = HashSet::from([(vec![k.label(k.root())], k.root())]);
    for _ in 1..n {
        cur = cur
            .into_iter()
            .flat_map(|(w, s)| {
                k.successors(s).iter().map(move |&v| {
                    let mut w2 = w.clone();
                    w2.push(k.label(v));
                    (w2, v)
                }).collect::<Vec<_>>()
            })
            .collect();
    }
    cur.into_iter().map(|(w, _)| w).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["q", "r"]).unwrap()
    }

    fn q() -> Label {
        Label::singleton(0)
    }

    #[test]
    fn validation() {
        assert!(Kripke::new(ab(), 1, &[(0, 0)], vec![q()], 0).is_ok());
        assert_eq!(
            Kripke::new(ab(), 2, &[(0, 1)], vec![q(), q()], 0),
            Err(KripkeError::NotSerial(1))
        );
        assert_eq!(
            Kripke::new(ab(), 1, &[(0, 0)], vec![q()], 3),
            Err(KripkeError::BadRoot(3))
        );
    }

    #[test]
    fn membership_basics() {
        // 0 -> 1 -> 1, labels ∅ then {q}
        let k = Kripke::new(ab(), 2, &[(0, 1), (1, 1)], vec![Label::EMPTY, q()], 0).unwrap();
        let t = LassoTrace::new(vec![Label::EMPTY], vec![q()]).unwrap();
        assert!(k.trace_member(&t));
        let bad = LassoTrace::new(vec![q()], vec![q()]).unwrap();
        assert!(!k.trace_member(&bad));
        let short = LassoTrace::new(vec![], vec![Label::EMPTY]).unwrap();
        assert!(!k.trace_member(&short));
    }

    #[test]
    fn flip_flop_enumeration() {
        let k = Kripke::new(ab(), 2, &[(0, 1), (1, 0)], vec![q(), q()], 0).unwrap();
        let e = k.enumerate_ulp_traces(3, 3).unwrap();
        assert_eq!(e, vec![LassoTrace::constant(q())]);
        let one = Kripke::new(ab(), 1, &[(0, 0)], vec![Label::EMPTY], 0).unwrap();
        assert_eq!(
            one.enumerate_ulp_traces(1, 1).unwrap(),
            vec![LassoTrace::constant(Label::EMPTY)]
        );
    }

    #[test]
    fn chi_single_state() {
        let k = Kripke::new(ab(), 1, &[(0, 0)], vec![q()], 0).unwrap();
        let (k2, chi) = k.chi_formula().unwrap();
        assert_eq!(k2.alphabet().names(), &["q", "r", "@pw_0"]);
        let pw = Formula::prop("@pw_0");
        let want = pw.clone().and(
            conj([pw.clone(), Formula::prop("q"), Formula::prop("r").neg(), pw.next()])
                .globally(),
        );
        assert_eq!(chi, want);
    }

    #[test]
    fn countability() {
        let chain = Kripke::new(ab(), 2, &[(0, 1), (1, 1)], vec![Label::EMPTY, q()], 0).unwrap();
        assert_eq!(chain.countability_class(), Countability::AllUlp);
        let free = Kripke::new(
            ab(),
            2,
            &[(0, 0), (0, 1), (1, 0), (1, 1)],
            vec![Label::EMPTY, q()],
            0,
        )
        .unwrap();
        assert_eq!(free.countability_class(), Countability::Uncountable);
        // branching into two identical cycles is still countable
        let same = Kripke::new(
            ab(),
            3,
            &[(0, 1), (0, 2), (1, 1), (2, 2)],
            vec![Label::EMPTY, q(), q()],
            0,
        )
        .unwrap();
        assert_eq!(same.countability_class(), Countability::AllUlp);
    }

    #[test]
    fn file_round_trip() {
        let json = r#"{"states":2,"edges":[[0,1],[1,1]],"labels":[[],["q"]],"root":0}"#;
        let f: KripkeFile = serde_json::from_str(json).unwrap();
        let k = Kripke::from_file(&f).unwrap();
        assert_eq!(Kripke::from_file(&k.to_file()).unwrap(), k);
        let bad: KripkeFile =
            serde_json::from_str(r#"{"states":2,"edges":[[0,5]],"labels":[[],[]]}"#).unwrap();
        let errs = validate_file(&bad);
        assert!(errs.contains(&KripkeError::BadEdge(0, 5)));
        assert!(errs.contains(&KripkeError::NotSerial(0)));
        assert!(errs.contains(&KripkeError::NotSerial(1)));
    }
}
