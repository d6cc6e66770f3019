//! Symmetric spaces and the axiom hierarchy.
//!
//! A [`FiniteSpace`] is a labeled point set with an exact rational distance
//! table; only nonnegativity and a zero diagonal are enforced at
//! construction. Symmetry, reflexive sufficiency, the triangular and
//! tetrahedral inequalities and the general `(2+k)`-polyhedral inequality
//! are decided by the checks in [`axioms`], each returning an
//! [`AxiomReport`] whose witness can be re-evaluated against the space.
//!
//! [`RuleSpace`] covers countable carriers whose distance is given by an
//! evaluable rule; finite truncations materialize into `FiniteSpace` so
//! every verdict on them stays exact.

mod axioms;
mod chain;
mod rule;
mod space;

pub use axioms::{
    check_polyhedral, check_reflexive_sufficiency, check_rule_polyhedral, check_symmetry,
    check_tetrahedral, check_triangular, minimal_polyhedral_index, Axiom, AxiomReport,
    AxiomWitness,
};
pub use chain::{chain_length, chain_product, is_regular, Chain};
pub use rule::{DistRule, RulePoint, RuleSpace};
pub use space::{FiniteSpace, PointId, SpaceError};

use thiserror::Error;

/// Errors from axiom checks and chain operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    /// A check ran before its prerequisite axioms were established.
    #[error("axiom order violated: {check:?} requires {prerequisite:?} to hold")]
    AxiomOrder { check: Axiom, prerequisite: Axiom },
    /// Chain length is undefined for chains shorter than two entries.
    #[error("chain of length {len} is too short; need at least 2 entries")]
    ShortChain { len: usize },
    /// A chain entry does not belong to the space.
    #[error("point index {index} is outside a space of {size} points")]
    PointOutOfRange { index: usize, size: usize },
    /// A distance rule produced a negative or non-finite value.
    #[error("distance rule returned {value} for ({from}, {to})")]
    RuleEvaluation { from: String, to: String, value: f64 },
    /// A rule-space truncation cannot accommodate the requested check.
    #[error("truncation of {points} points is too small: {detail}")]
    BadTruncation { points: usize, detail: String },
}
