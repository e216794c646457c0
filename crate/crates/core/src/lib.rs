//! LTL with synchronous team semantics and Boolean negation.
//!
//! The crate evaluates LTL(~) formulas exactly over finite teams of
//! ultimately periodic traces, decides team stutter-equivalence, and
//! generates the arithmetic translations and reduction gadgets that relate
//! team-semantic model checking and satisfiability to higher-order arithmetic.

pub mod arith;
pub mod eval;
pub mod formula;
pub mod forge;
pub mod gen;
pub mod kripke;
pub mod props;
pub mod stutter;
pub mod team;
pub mod trace;

pub use eval::{check, check_classical, check_with, EvalConfig, EvalError, Evaluator};
pub use formula::{fragment_check, parse, print, Formula, FragmentMode, TemporalOp};
pub use kripke::Kripke;
pub use team::{Horizon, Team};
pub use trace::{Alphabet, Label, LassoTrace};
