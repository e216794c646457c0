//! Reductions between arithmetic, model checking and satisfiability.
//!
//! [`gadget`] builds the structures whose traces encode numbers, sets and
//! tuples, [`rho`] translates normal-form arithmetic into team formulas over
//! those structures, and [`mc2sat`] turns a model-checking instance into a
//! single formula whose satisfiability decides it.

pub mod gadget;
pub mod mc2sat;
pub mod rho;

use thiserror::Error;

use crate::arith::{ArithError, ArithType};
use crate::kripke::KripkeError;
use crate::team::TeamError;
use crate::trace::TraceError;

pub use gadget::{
    assemble_k_phi, build_bounded_universe, gadget, root_gadget, Layout, SetSpec, VarInfo,
};
pub use mc2sat::{mc2sat, xi_sub_proto, Mc2SatMode};
pub use rho::{arith_to_mc, translate_rho, translate_rho_in};

/// End-of-number marker.
pub const END: &str = "@end";
/// Prototrace marker `#`.
pub const HASH: &str = "@hash";
/// Root marker for finitely generated teams.
pub const ROOT: &str = "@root";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForgeError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Kripke(#[from] KripkeError),
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Team(#[from] TeamError),
    #[error("variable `{var}` has type {ty}, which has no gadget")]
    UnsupportedType { var: String, ty: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{var}` is not {expected}")]
    WrongKind { var: String, expected: &'static str },
    #[error("need at least two propositions, got {0}")]
    TooFewProps(usize),
    #[error("proposition `{0}` does not occur in the structure")]
    UnknownProposition(String),
    #[error("proposition name `{0}` clashes with a generated name")]
    ReservedName(String),
    #[error("formula outside the supported fragment: {0}")]
    Fragment(String),
    #[error("states {0} and {1} carry the same label")]
    DuplicateLabel(usize, usize),
    #[error("size cap exceeded: {0}")]
    Cap(String),
}

/// How a variable is represented by traces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    FirstOrder,
    SecondOrderUnary,
    /// Binary or ternary relation, one trace per tuple.
    SecondOrderTuple(usize),
    ThirdOrderUnary,
}

impl VarKind {
    pub fn from_type(var: &str, t: &ArithType) -> Result<Self, ForgeError> {
        match t {
            ArithType::First => Ok(VarKind::FirstOrder),
            ArithType::Second(1) => Ok(VarKind::SecondOrderUnary),
            ArithType::Second(l @ 2..=3) => Ok(VarKind::SecondOrderTuple(*l)),
            ArithType::Third(ns) if ns == &[1] => Ok(VarKind::ThirdOrderUnary),
            t => Err(ForgeError::UnsupportedType {
                var: var.into(),
                ty: t.to_string(),
            }),
        }
    }

    /// Number of digit tracks on the gadget's traces.
    pub fn tracks(self) -> usize {
        match self {
            VarKind::SecondOrderTuple(l) => l,
            _ => 1,
        }
    }

    fn uses_end(self) -> bool {
        matches!(self, VarKind::FirstOrder | VarKind::SecondOrderTuple(_))
    }
}

/// Digit proposition `0_k` / `1_k`; track 1 uses plain `0` and `1`.
pub fn digit(bit: bool, track: usize) -> String {
    match (track, bit) {
        (1, false) => "0".into(),
        (1, true) => "1".into(),
        (k, b) => format!("@d{}_{k}", u8::from(b)),
    }
}
