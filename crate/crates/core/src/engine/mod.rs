//! Constant derivation for systems that break each of the twelve relations.
//!
//! Given formulas F1..F12 where F_i fails to preserve R_i, the engine builds
//! explicit terms for each of the four constants. Every term is a composition
//! of members; its table is computed by composition and each claim made along
//! the way is checked against those tables.

mod lemmas;
mod system;
mod term;

use thiserror::Error;

pub use lemmas::{derive_all_constants, derive_small_constant, lemma1_a, lemma2_b, lemma3, lemma4, lemma5};
pub use system::{Member, TwelveSystem};
pub use term::{expand, term_table, Definition, Derivation, Term, TraceStep};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error("precondition violated{}: {reason}", index.map(|i| format!(" at F{i}")).unwrap_or_default())]
    PreconditionViolated { index: Option<usize>, reason: String },
    #[error("internal proof check failed at {step}: {claim}")]
    InternalProofCheckFailed { step: String, claim: String },
    #[error("invalid member {label}: {reason}")]
    InvalidMember { label: String, reason: String },
    #[error("invalid witness for F{index}: {reason}")]
    InvalidWitness { index: usize, reason: String },
}
