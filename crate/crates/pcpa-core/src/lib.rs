//! Models and algorithms for parallel communicating pushdown automata (PCPA)
//! systems and multi-head pushdown automata.
//!
//! The crate is `no_std` (with `alloc`) and has no runtime dependencies. It
//! provides:
//!
//! * data types for degree-`n` PCPA systems and their validation
//!   ([`system`]),
//! * lock-step operational semantics with communication steps ([`step`]),
//! * bounded breadth-first membership search with honest three-valued
//!   verdicts ([`search`]),
//! * multi-head single-stack pushdown machines ([`multihead`]),
//! * structure-preserving transforms: the known-communication normal form,
//!   compilation of centralized returning systems to multi-head machines,
//!   and decomposition of simple systems ([`transform`]),
//! * a comparison harness that samples languages over bounded word lengths
//!   and checks behavioural properties ([`harness`]),
//! * ready-made example systems used throughout the test suite
//!   ([`fixtures`]).

#![no_std]
#![forbid(unsafe_code)]
#![warn(missing_docs)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod fixtures;
pub mod harness;
pub mod multihead;
pub mod search;
pub mod step;
pub mod symbol;
pub mod system;
pub mod transform;

pub use search::{SearchLimits, SearchOutcome, SearchStats, Trace, Verdict};
pub use step::{CommStep, StepKind, SystemConfiguration};
pub use symbol::{StateId, Symbol, TokenError};
pub use system::{
    KcPhase, KcState, Mode, PcpaSystem, PdaComponent, SystemClass, Transition, ValidationError,
    ValidationReport,
};
