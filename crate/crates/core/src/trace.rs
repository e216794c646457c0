//! Labels, alphabets and ultimately periodic (lasso) traces.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum number of propositions an alphabet (and hence a label) can hold.
pub const MAX_PROPS: usize = 512;
const WORDS: usize = MAX_PROPS / 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TraceError {
    #[error("alphabet has {0} propositions, cap is {MAX_PROPS}")]
    AlphabetOverflow(usize),
    #[error("duplicate proposition `{0}` in alphabet")]
    DuplicateProp(String),
    #[error("invalid proposition name `{0}`")]
    InvalidName(String),
    #[error("unknown proposition `{0}`")]
    UnknownProp(String),
    #[error("loop of a lasso must be non-empty")]
    EmptyLoop,
}

/// True if `name` is a syntactically valid proposition name.
pub fn valid_prop_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '@')
}

/// An ordered, duplicate-free list of proposition names.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Arc<Vec<String>>,
    index: Arc<HashMap<String, usize>>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Result<Self, TraceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_PROPS {
            return Err(TraceError::AlphabetOverflow(names.len()));
        }
        let mut index = HashMap::with_capacity(names.len());
        for (i, n) in names.iter().enumerate() {
            if !valid_prop_name(n) {
                return Err(TraceError::InvalidName(n.clone()));
            }
            if index.insert(n.clone(), i).is_some() {
                return Err(TraceError::DuplicateProp(n.clone()));
            }
        }
        Ok(Alphabet {
            names: Arc::new(names),
            index: Arc::new(index),
        })
    }

    pub fn empty() -> Self {
        Alphabet::new(Vec::<String>::new()).unwrap()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    /// Alphabet extended by `extra` names not already present (order kept).
    pub fn extended<I, S>(&self, extra: I) -> Result<Self, TraceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut names = self.names.as_ref().clone();
        for n in extra {
            let n = n.into();
            if !self.contains(&n) && !names.contains(&n) {
                names.push(n);
            }
        }
        Alphabet::new(names)
    }

    /// Label containing exactly the named propositions.
    pub fn label<I, S>(&self, props: I) -> Result<Label, TraceError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut l = Label::EMPTY;
        for p in props {
            let p = p.as_ref();
            let i = self
                .index_of(p)
                .ok_or_else(|| TraceError::UnknownProp(p.to_string()))?;
            l.insert(i);
        }
        Ok(l)
    }

    /// Names of the propositions set in `l`, in alphabet order.
    pub fn label_names(&self, l: &Label) -> Vec<String> {
        l.iter()
            .filter(|&i| i < self.len())
            .map(|i| self.names[i].clone())
            .collect()
    }

    pub fn format_label(&self, l: &Label) -> String {
        format!("{{{}}}", self.label_names(l).join(","))
    }

    /// Mask with every proposition of this alphabet set.
    pub fn full_mask(&self) -> Label {
        let mut l = Label::EMPTY;
        for i in 0..self.len() {
            l.insert(i);
        }
        l
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.names.iter()).finish()
    }
}

/// A set of proposition indices as a fixed-width bitset.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Label([u64; WORDS]);

impl Label {
    pub const EMPTY: Label = Label([0; WORDS]);

    pub fn singleton(i: usize) -> Label {
        let mut l = Label::EMPTY;
        l.insert(i);
        l
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Label {
        let mut l = Label::EMPTY;
        for i in it {
            l.insert(i);
        }
        l
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersect(&self, other: &Label) -> Label {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= *b;
        }
        out
    }

    pub fn union(&self, other: &Label) -> Label {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a |= *b;
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_PROPS).filter(move |&i| self.contains(i))
    }

    /// Highest set index plus one (0 for the empty label).
    pub fn width(&self) -> usize {
        for w in (0..WORDS).rev() {
            if self.0[w] != 0 {
                return w * 64 + 64 - self.0[w].leading_zeros() as usize;
            }
        }
        0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// An ultimately periodic trace `prefix · loop^ω`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LassoTrace {
    prefix: Vec<Label>,
    cycle: Vec<Label>,
}

impl LassoTrace {
    pub fn new(prefix: Vec<Label>, cycle: Vec<Label>) -> Result<Self, TraceError> {
        if cycle.is_empty() {
            return Err(TraceError::EmptyLoop);
        }
        Ok(LassoTrace { prefix, cycle })
    }

    /// `new` followed by `normalize`.
    pub fn normalized(prefix: Vec<Label>, cycle: Vec<Label>) -> Result<Self, TraceError> {
        Ok(Self::new(prefix, cycle)?.normalize())
    }

    /// The constant trace `l^ω`.
    pub fn constant(l: Label) -> Self {
        LassoTrace {
            prefix: vec![],
            cycle: vec![l],
        }
    }

    pub fn prefix(&self) -> &[Label] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Label] {
        &self.cycle
    }

    /// Length of the finite representation, `|prefix| + |loop|`.
    pub fn span(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    #[inline]
    pub fn at(&self, i: usize) -> Label {
        if i < self.prefix.len() {
            self.prefix[i]
        } else {
            self.cycle[(i - self.prefix.len()) % self.cycle.len()]
        }
    }

    pub fn normalize(&self) -> LassoTrace {
        let p = minimal_period(&self.cycle);
        let mut cycle: Vec<Label> = self.cycle[..p].to_vec();
        let mut prefix = self.prefix.clone();
        // Roll the loop backwards over matching prefix labels.
        while let Some(&last) = prefix.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        LassoTrace { prefix, cycle }
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalize()
    }

    /// `t^k`, normalized.
    pub fn suffix(&self, k: usize) -> LassoTrace {
        if k < self.prefix.len() {
            LassoTrace {
                prefix: self.prefix[k..].to_vec(),
                cycle: self.cycle.clone(),
            }
            .normalize()
        } else {
            let mut cycle = self.cycle.clone();
            let r = (k - self.prefix.len()) % cycle.len();
            cycle.rotate_left(r);
            LassoTrace {
                prefix: vec![],
                cycle,
            }
            .normalize()
        }
    }

    /// Pointwise intersection with `mask`, normalized.
    pub fn project(&self, mask: &Label) -> LassoTrace {
        LassoTrace {
            prefix: self.prefix.iter().map(|l| l.intersect(mask)).collect(),
            cycle: self.cycle.iter().map(|l| l.intersect(mask)).collect(),
        }
        .normalize()
    }

    /// Apply `f` to every label, normalized.
    pub fn map_labels(&self, f: impl Fn(&Label) -> Label) -> LassoTrace {
        LassoTrace {
            prefix: self.prefix.iter().map(&f).collect(),
            cycle: self.cycle.iter().map(&f).collect(),
        }
        .normalize()
    }

    pub fn is_ultimately_constant(&self) -> bool {
        minimal_period(&self.cycle) == 1
    }

    pub fn is_constant(&self) -> bool {
        let n = self.normalize();
        n.cycle.len() == 1 && n.prefix.is_empty()
    }

    /// Union of all labels occurring in the trace.
    pub fn support(&self) -> Label {
        self.prefix
            .iter()
            .chain(self.cycle.iter())
            .fold(Label::EMPTY, |a, b| a.union(b))
    }

    pub fn display(&self, alphabet: &Alphabet) -> String {
        let pre: Vec<String> = self.prefix.iter().map(|l| alphabet.format_label(l)).collect();
        let cyc: Vec<String> = self.cycle.iter().map(|l| alphabet.format_label(l)).collect();
        format!("{}({})^w", pre.join(""), cyc.join(""))
    }

    pub fn to_literal(&self, alphabet: &Alphabet) -> TraceLiteral {
        TraceLiteral {
            prefix: self.prefix.iter().map(|l| alphabet.label_names(l)).collect(),
            r#loop: self.cycle.iter().map(|l| alphabet.label_names(l)).collect(),
        }
    }

    pub fn from_literal(lit: &TraceLiteral, alphabet: &Alphabet) -> Result<Self, TraceError> {
        let conv = |v: &Vec<Vec<String>>| -> Result<Vec<Label>, TraceError> {
            v.iter().map(|names| alphabet.label(names)).collect()
        };
        LassoTrace::new(conv(&lit.prefix)?, conv(&lit.r#loop)?)
    }
}

impl fmt::Debug for LassoTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}({:?})^w", self.prefix, self.cycle)
    }
}

/// JSON form of a trace: `{"prefix": [["p"],[]], "loop": [["q"]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceLiteral {
    #[serde(default)]
    pub prefix: Vec<Vec<String>>,
    pub r#loop: Vec<Vec<String>>,
}

/// Smallest `p` dividing `|w|` with `w` equal to `w[..p]` repeated.
pub fn minimal_period<T: PartialEq>(w: &[T]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let mut border = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = border[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        border[i] = k;
    }
    let p = n - border[n - 1];
    if n % p == 0 {
        p
    } else {
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["p", "q"]).unwrap()
    }

    fn l(a: &Alphabet, names: &[&str]) -> Label {
        a.label(names).unwrap()
    }

    #[test]
    fn at_indexes_prefix_then_loop() {
        let a = ab();
        let t = LassoTrace::new(vec![l(&a, &["p"])], vec![Label::EMPTY]).unwrap();
        assert_eq!(t.at(0), l(&a, &["p"]));
        assert_eq!(t.at(7), Label::EMPTY);
        let t = LassoTrace::new(vec![], vec![l(&a, &["p"]), l(&a, &["q"])]).unwrap();
        assert_eq!(t.at(3), l(&a, &["q"]));
    }

    #[test]
    fn normalize_examples() {
        let a = ab();
        let (x, y) = (l(&a, &["p"]), l(&a, &["q"]));
        let t = LassoTrace::new(vec![x], vec![y, y]).unwrap().normalize();
        assert_eq!((t.prefix(), t.cycle()), (&[x][..], &[y][..]));
        let t = LassoTrace::new(vec![x, y], vec![y]).unwrap().normalize();
        assert_eq!((t.prefix(), t.cycle()), (&[x][..], &[y][..]));
        let t = LassoTrace::new(vec![], vec![x, y, x, y]).unwrap().normalize();
        assert_eq!(t.cycle(), &[x, y][..]);
        // rolling the prefix rotates the loop
        let t = LassoTrace::new(vec![y, x], vec![y, x]).unwrap().normalize();
        assert_eq!((t.prefix(), t.cycle()), (&[][..], &[y, x][..]));
    }

    #[test]
    fn suffix_examples() {
        let a = ab();
        let p = l(&a, &["p"]);
        let q = l(&a, &["q"]);
        let t = LassoTrace::new(vec![Label::EMPTY, p], vec![Label::EMPTY]).unwrap();
        assert_eq!(
            t.suffix(1),
            LassoTrace::new(vec![p], vec![Label::EMPTY]).unwrap()
        );
        let t = LassoTrace::new(vec![], vec![p, q]).unwrap();
        assert_eq!(t.suffix(5), LassoTrace::new(vec![], vec![q, p]).unwrap());
        for i in 0..10 {
            assert_eq!(t.suffix(5).at(i), t.at(5 + i));
        }
    }

    #[test]
    fn project_example() {
        let a = ab();
        let (p, q, pq) = (l(&a, &["p"]), l(&a, &["q"]), l(&a, &["p", "q"]));
        let t = LassoTrace::new(vec![p, q], vec![pq]).unwrap();
        let r = t.project(&q);
        assert_eq!((r.prefix(), r.cycle()), (&[Label::EMPTY][..], &[q][..]));
        assert!(LassoTrace::constant(pq).project(&Label::EMPTY).is_constant());
    }

    #[test]
    fn constancy() {
        let a = ab();
        let p = l(&a, &["p"]);
        let t = LassoTrace::new(vec![p], vec![Label::EMPTY]).unwrap();
        assert!(t.is_ultimately_constant() && !t.is_constant());
        let t = LassoTrace::constant(p);
        assert!(t.is_ultimately_constant() && t.is_constant());
        let t = LassoTrace::new(vec![], vec![p, Label::EMPTY]).unwrap();
        assert!(!t.is_ultimately_constant() && !t.is_constant());
    }

    #[test]
    fn minimal_period_cases() {
        assert_eq!(minimal_period(&[1, 2, 1, 2]), 2);
        assert_eq!(minimal_period(&[1, 2, 1]), 3);
        assert_eq!(minimal_period(&[3, 3, 3]), 1);
    }

    #[test]
    fn alphabet_rejects_bad_names() {
        assert!(matches!(
            Alphabet::new(["p", "p"]),
            Err(TraceError::DuplicateProp(_))
        ));
        assert!(matches!(
            Alphabet::new(["a b"]),
            Err(TraceError::InvalidName(_))
        ));
        let many: Vec<String> = (0..513).map(|i| format!("p{i}")).collect();
        assert!(matches!(
            Alphabet::new(many),
            Err(TraceError::AlphabetOverflow(513))
        ));
    }
}
