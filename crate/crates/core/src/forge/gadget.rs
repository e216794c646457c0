//! Gadget structures, the merged structure `K^φ`, and trace encodings of
//! numbers, sets and tuples.

use std::collections::BTreeSet;

use super::{digit, ForgeError, VarKind, END, HASH, ROOT};
use crate::arith::Arith;
use crate::kripke::Kripke;
use crate::team::Team;
use crate::trace::{Alphabet, Label, LassoTrace};

/// Largest number (or set element) an encoder accepts.
pub const MAX_ENCODED: u64 = 10_000;
/// Largest bound accepted by [`build_bounded_universe`].
pub const MAX_UNIVERSE_BOUND: u64 = 12;
/// Largest proposition count accepted by [`root_gadget`].
pub const MAX_ROOT_GADGET_PROPS: usize = 6;

/// A structure before it is bound to an alphabet. State 0 is the root.
struct Shape {
    labels: Vec<Vec<String>>,
    edges: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Phase {
    Zero,
    One,
    End,
}

fn number_shape(tracks: usize) -> Shape {
    let phases = [Phase::Zero, Phase::One, Phase::End];
    let count = 3usize.pow(tracks as u32);
    let decode = |mut i: usize| {
        let mut c = vec![Phase::Zero; tracks];
        for k in (0..tracks).rev() {
            c[k] = phases[i % 3];
            i /= 3;
        }
        c
    };
    let encode = |c: &[Phase]| {
        1 + c
            .iter()
            .fold(0, |acc, p| acc * 3 + phases.iter().position(|q| q == p).unwrap())
    };
    let mut labels = vec![vec![]];
    let mut edges = vec![];
    for i in 0..count {
        let c = decode(i);
        let mut l: Vec<String> = c
            .iter()
            .enumerate()
            .map(|(k, p)| digit(*p == Phase::One, k + 1))
            .collect();
        if c.iter().all(|p| *p == Phase::End) {
            l.push(END.into());
        }
        labels.push(l);
        if c.iter().all(|p| *p != Phase::End) {
            edges.push((0, encode(&c)));
        }
        // successors: Z → Z, O; O → E; E → E, componentwise
        let mut succ = vec![vec![]];
        for p in &c {
            let next: &[Phase] = match p {
                Phase::Zero => &[Phase::Zero, Phase::One],
                Phase::One | Phase::End => &[Phase::End],
            };
            succ = succ
                .into_iter()
                .flat_map(|s: Vec<Phase>| {
                    next.iter().map(move |n| {
                        let mut s = s.clone();
                        s.push(*n);
                        s
                    })
                })
                .collect();
        }
        for s in succ {
            edges.push((encode(&c), encode(&s)));
        }
    }
    Shape { labels, edges }
}

fn relation_shape() -> Shape {
    Shape {
        labels: vec![vec![], vec!["0".into()], vec!["1".into()]],
        edges: vec![(0, 1), (0, 2), (1, 1), (1, 2), (2, 1), (2, 2)],
    }
}

fn shape(kind: VarKind) -> Shape {
    match kind {
        VarKind::FirstOrder => number_shape(1),
        VarKind::SecondOrderTuple(l) => number_shape(l),
        VarKind::SecondOrderUnary | VarKind::ThirdOrderUnary => relation_shape(),
    }
}

fn base_names(kinds: impl IntoIterator<Item = VarKind>) -> Vec<String> {
    let kinds: Vec<VarKind> = kinds.into_iter().collect();
    let mut names = vec!["0".to_string(), "1".to_string()];
    if kinds.iter().any(|k| k.uses_end()) {
        names.push(END.into());
    }
    let tracks = kinds.iter().map(|k| k.tracks()).max().unwrap_or(1);
    for k in 2..=tracks {
        names.push(digit(false, k));
        names.push(digit(true, k));
    }
    names
}

fn build(alphabet: Alphabet, s: &Shape) -> Result<Kripke, ForgeError> {
    let labels = s
        .labels
        .iter()
        .map(|l| alphabet.label(l.iter()))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Kripke::new(alphabet, s.labels.len(), &s.edges, labels, 0)?)
}

/// The gadget of one variable kind, over its own digit alphabet.
///
/// Numbers use the four-state structure `∅ → {0}* → {1} → {0,end}^ω`
/// (with the root also stepping straight to `{1}`), unary relations the
/// fully connected `{0}`/`{1}` pair, and `ℓ`-tuples the `ℓ`-fold product of
/// the number gadget.
pub fn gadget(kind: VarKind) -> Kripke {
    let alphabet = Alphabet::new(base_names([kind])).expect("fixed names are valid");
    build(alphabet, &shape(kind)).expect("gadgets are serial")
}

/// One quantified variable of a normal-form sentence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarInfo {
    pub name: String,
    pub kind: VarKind,
    /// Proposition marking the non-root states of this variable's gadget.
    pub marker: String,
}

/// Variables, their markers and the alphabet of `K^φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    alphabet: Alphabet,
    vars: Vec<VarInfo>,
}

/// A unary relation, given either by its finitely many members or as an
/// ultimately periodic characteristic sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SetSpec {
    Finite(BTreeSet<u64>),
    /// `n ∈ A` iff bit `n` of `prefix · cycle^ω` is set.
    Periodic { prefix: Vec<bool>, cycle: Vec<bool> },
}

impl SetSpec {
    pub fn contains(&self, n: u64) -> bool {
        match self {
            SetSpec::Finite(s) => s.contains(&n),
            SetSpec::Periodic { prefix, cycle } => {
                let n = n as usize;
                if n < prefix.len() {
                    prefix[n]
                } else {
                    cycle[(n - prefix.len()) % cycle.len()]
                }
            }
        }
    }
}

impl Layout {
    /// Markers are `@x1, @x2, …` in the given order.
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = (S, VarKind)>) -> Result<Self, ForgeError> {
        let vars: Vec<VarInfo> = vars
            .into_iter()
            .enumerate()
            .map(|(i, (name, kind))| VarInfo {
                name: name.into(),
                kind,
                marker: format!("@x{}", i + 1),
            })
            .collect();
        let mut seen = BTreeSet::new();
        for v in &vars {
            if !seen.insert(v.name.as_str()) {
                return Err(ForgeError::Arith(crate::arith::ArithError::NotNormalForm(
                    format!("`{}` is bound twice", v.name),
                )));
            }
        }
        let mut names = base_names(vars.iter().map(|v| v.kind));
        names.extend(vars.iter().map(|v| v.marker.clone()));
        Ok(Layout {
            alphabet: Alphabet::new(names)?,
            vars,
        })
    }

    /// Every quantified variable of `f`, in order of appearance.
    pub fn of(f: &Arith) -> Result<Self, ForgeError> {
        let mut out = vec![];
        collect_binders(f, &mut out)?;
        Self::new(out)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vars(&self) -> &[VarInfo] {
        &self.vars
    }

    pub fn var(&self, name: &str) -> Result<&VarInfo, ForgeError> {
        self.vars
            .iter()
            .find(|v| v.name == name)
            .ok_or_else(|| ForgeError::UnknownVariable(name.into()))
    }

    fn var_of(&self, name: &str, ok: impl Fn(VarKind) -> bool, expected: &'static str) -> Result<&VarInfo, ForgeError> {
        let v = self.var(name)?;
        if ok(v.kind) {
            Ok(v)
        } else {
            Err(ForgeError::WrongKind {
                var: name.into(),
                expected,
            })
        }
    }

    fn label(&self, names: &[String], marker: &str) -> Result<Label, ForgeError> {
        Ok(self
            .alphabet
            .label(names.iter().map(String::as_str).chain([marker]))?)
    }

    /// `K^φ`: the gadgets of all variables with their roots identified and
    /// every other state marked with the variable's marker.
    pub fn structure(&self) -> Result<Kripke, ForgeError> {
        let mut labels = vec![Label::EMPTY];
        let mut edges = vec![];
        for v in &self.vars {
            let s = shape(v.kind);
            let offset = labels.len() - 1;
            let id = |i: usize| if i == 0 { 0 } else { i + offset };
            for l in &s.labels[1..] {
                labels.push(self.label(l, &v.marker)?);
            }
            edges.extend(s.edges.iter().map(|&(a, b)| (id(a), id(b))));
        }
        if self.vars.is_empty() {
            edges.push((0, 0));
        }
        Ok(Kripke::new(self.alphabet.clone(), labels.len(), &edges, labels, 0)?)
    }

    fn tracks_trace(&self, v: &VarInfo, ns: &[u64]) -> Result<LassoTrace, ForgeError> {
        if let Some(&n) = ns.iter().find(|&&n| n > MAX_ENCODED) {
            return Err(ForgeError::Cap(format!("{n} exceeds {MAX_ENCODED}")));
        }
        let max = ns.iter().copied().max().unwrap_or(0);
        let mut prefix = vec![Label::EMPTY];
        for i in 0..=max {
            let digits: Vec<String> = ns
                .iter()
                .enumerate()
                .map(|(k, &n)| digit(i == n, k + 1))
                .collect();
            prefix.push(self.label(&digits, &v.marker)?);
        }
        let mut tail: Vec<String> = (0..ns.len()).map(|k| digit(false, k + 1)).collect();
        tail.push(END.into());
        let cycle = vec![self.label(&tail, &v.marker)?];
        Ok(LassoTrace::normalized(prefix, cycle)?)
    }

    /// `∅ {0}^n {1} {0,end}^ω`, marked.
    pub fn encode_number(&self, var: &str, n: u64) -> Result<LassoTrace, ForgeError> {
        let v = self.var_of(var, |k| k == VarKind::FirstOrder, "first-order")?;
        self.tracks_trace(v, &[n])
    }

    /// `∅ {0}^ω`, the one trace of the number gadget that represents nothing.
    pub fn encode_stuck(&self, var: &str) -> Result<LassoTrace, ForgeError> {
        let v = self.var_of(var, |k| k == VarKind::FirstOrder, "first-order")?;
        let zero = self.label(&["0".into()], &v.marker)?;
        Ok(LassoTrace::normalized(vec![Label::EMPTY], vec![zero])?)
    }

    /// Position `n + 1` carries `1` iff `n ∈ A`, and `0` otherwise.
    pub fn encode_set(&self, var: &str, spec: &SetSpec) -> Result<LassoTrace, ForgeError> {
        let v = self.var_of(
            var,
            |k| matches!(k, VarKind::SecondOrderUnary | VarKind::ThirdOrderUnary),
            "a unary relation or family",
        )?;
        let bit = |b: bool| self.label(&[digit(b, 1)], &v.marker);
        let (bits, cycle) = match spec {
            SetSpec::Finite(s) => {
                let max = s.iter().next_back().copied();
                if max.is_some_and(|m| m > MAX_ENCODED) {
                    return Err(ForgeError::Cap(format!("set element above {MAX_ENCODED}")));
                }
                let bits: Vec<bool> = match max {
                    Some(m) => (0..=m).map(|i| s.contains(&i)).collect(),
                    None => vec![],
                };
                (bits, vec![false])
            }
            SetSpec::Periodic { prefix, cycle } => {
                if cycle.is_empty() {
                    return Err(ForgeError::Trace(crate::trace::TraceError::EmptyLoop));
                }
                if prefix.len() + cycle.len() > MAX_ENCODED as usize {
                    return Err(ForgeError::Cap("set pattern too long".into()));
                }
                (prefix.clone(), cycle.clone())
            }
        };
        let mut prefix = vec![Label::EMPTY];
        for b in bits {
            prefix.push(bit(b)?);
        }
        let cycle = cycle.into_iter().map(bit).collect::<Result<Vec<_>, _>>()?;
        Ok(LassoTrace::normalized(prefix, cycle)?)
    }

    /// Track `k` represents `ns[k-1]`; `end` appears once every track has
    /// passed its `1`.
    pub fn encode_tuple(&self, var: &str, ns: &[u64]) -> Result<LassoTrace, ForgeError> {
        let v = self.var_of(var, |k| matches!(k, VarKind::SecondOrderTuple(_)), "a tuple relation")?;
        if ns.len() != v.kind.tracks() {
            return Err(ForgeError::WrongKind {
                var: var.into(),
                expected: "a relation of this arity",
            });
        }
        self.tracks_trace(v, ns)
    }
}

fn collect_binders(f: &Arith, out: &mut Vec<(String, VarKind)>) -> Result<(), ForgeError> {
    match f {
        Arith::Quant(_, x, t, body) => {
            out.push((x.clone(), VarKind::from_type(x, t)?));
            collect_binders(body, out)
        }
        Arith::Not(a) => collect_binders(a, out),
        Arith::And(a, b) | Arith::Or(a, b) | Arith::Implies(a, b) | Arith::Iff(a, b) => {
            collect_binders(a, out)?;
            collect_binders(b, out)
        }
        _ => Ok(()),
    }
}

/// `K^ψ` and its layout.
pub fn assemble_k_phi(f: &Arith) -> Result<(Kripke, Layout), ForgeError> {
    let layout = Layout::of(f)?;
    Ok((layout.structure()?, layout))
}

/// A finite part of `T(K^ψ)`: every number below `bound` plus the stuck
/// trace for each first-order variable, and every subset of `[0, bound)` for
/// each unary second-order variable.
pub fn build_bounded_universe(f: &Arith, bound: u64) -> Result<(Layout, Team), ForgeError> {
    if bound > MAX_UNIVERSE_BOUND {
        return Err(ForgeError::Cap(format!("bound {bound} exceeds {MAX_UNIVERSE_BOUND}")));
    }
    let layout = Layout::of(f)?;
    let mut count = 0u64;
    for v in layout.vars() {
        count += match v.kind {
            VarKind::FirstOrder => bound + 1,
            VarKind::SecondOrderUnary => 1 << bound,
            _ => {
                return Err(ForgeError::UnsupportedType {
                    var: v.name.clone(),
                    ty: "anything but first-order or unary second-order".into(),
                })
            }
        };
    }
    if count > crate::eval::MAX_TEAM as u64 {
        return Err(ForgeError::Cap(format!(
            "{count} traces exceed the team cap of {}",
            crate::eval::MAX_TEAM
        )));
    }
    let mut traces = vec![];
    for v in layout.vars() {
        match v.kind {
            VarKind::FirstOrder => {
                for n in 0..bound {
                    traces.push(layout.encode_number(&v.name, n)?);
                }
                traces.push(layout.encode_stuck(&v.name)?);
            }
            _ => {
                for mask in 0u64..1 << bound {
                    let s = (0..bound).filter(|i| mask >> i & 1 == 1).collect();
                    traces.push(layout.encode_set(&v.name, &SetSpec::Finite(s))?);
                }
            }
        }
    }
    let team = Team::new(layout.alphabet().clone(), traces)?;
    Ok((layout, team))
}

/// A finite structure whose traces are `{root}` followed by any word over
/// `props`, together with the delayed prototraces `{root} ∅* {p} {#}^ω`.
pub fn root_gadget(props: &[String]) -> Result<Kripke, ForgeError> {
    let n = props.len();
    if n > MAX_ROOT_GADGET_PROPS {
        return Err(ForgeError::Cap(format!("{n} propositions (at most {MAX_ROOT_GADGET_PROPS})")));
    }
    let alphabet = Alphabet::new(props.iter().map(String::as_str).chain([HASH, ROOT]))?;
    let full = 1usize << n;
    let mut labels = vec![Label::singleton(n + 1)];
    labels.extend((0..full).map(|m| Label::from_indices((0..n).filter(|i| m >> i & 1 == 1))));
    let mut edges = vec![];
    for a in 1..=full {
        edges.push((0, a));
        edges.extend((1..=full).map(|b| (a, b)));
    }
    let empty = labels.len();
    labels.push(Label::EMPTY);
    let hash = labels.len();
    labels.push(Label::singleton(n));
    edges.extend([(0, empty), (empty, empty), (hash, hash)]);
    for i in 0..n {
        let p = labels.len();
        labels.push(Label::singleton(i));
        edges.extend([(0, p), (empty, p), (p, hash)]);
    }
    Ok(Kripke::new(alphabet, labels.len(), &edges, labels, 0)?)
}
