//! Verification toolkit for fixed-point theory over generalized metric
//! spaces with polyhedral (chain) inequalities.
//!
//! The crate decides the axiom hierarchy of a symmetric distance table
//! ([`metric`]), classifies comparison functions with grid semi-decisions
//! ([`phi`]), runs Picard orbits with full convergence diagnostics
//! ([`orbit`]), and brute-force-certifies the fixed-point theorem's
//! hypotheses and conclusion on desk-scale instances ([`certify`]).
//! Instances travel in a line-oriented exact-rational text format
//! ([`instance`], [`builtins`]) and results in a deterministic report tree
//! ([`report`]).
//!
//! Finite-space verdicts are exact: distances are arbitrary-precision
//! rationals and no axiom comparison involves a tolerance. Floating point
//! appears only in rule evaluation, parsed expression functions, and
//! iterate bookkeeping, and is flagged as approximate wherever it leaks
//! into a result.

pub mod builtins;
pub mod certify;
pub mod instance;
pub mod metric;
pub mod orbit;
pub mod phi;
pub mod rational;
pub mod report;
