//! The four-element Magari algebra of GL4.
//!
//! * [`algebra`]: elements, connectives and identity checks.
//! * [`formula`]: formula syntax, parsing, printing, evaluation and tables.
//! * [`preservation`]: relation preservation and the twelve relations R1..R12.
//! * [`synthesis`]: realizing formulas for Δ-class preserving tables.
//! * [`closure`]: brute-force expressibility for small systems.
//! * [`engine`]: explicit constant derivations.

pub mod algebra;
pub mod closure;
pub mod engine;
pub mod formula;
pub mod preservation;
pub mod synthesis;

pub use algebra::{Connective, DeltaClass, Element};
pub use formula::{parse, Formula, FuncTable, Valuation};
pub use preservation::{builtin_relation, find_violation, preserves, RelationMatrix, ViolationWitness};
