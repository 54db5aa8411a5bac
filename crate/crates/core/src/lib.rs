//! Quantum mechanics over finite fields, computed exactly.
//!
//! States live in GF(q)^N modulo nonzero scalars, measurement outcomes are
//! dual vectors, and probabilities come from the zero/nonzero absolute value
//! of field brackets. The crate covers single "spin" systems GQM(2,q), the
//! two-particle space GF(q)^2 ⊗ GF(q)^2, CHSH correlator searches,
//! local hidden-variable refutation and the PGL(2,q) basis-change groups.
//!
//! All arithmetic on probabilities is done in [`Rational`]; nothing is ever
//! rounded.

pub mod chsh;
pub mod correlation;
pub mod field;
pub mod geometry;
pub mod group;
pub mod hv;
pub mod observable;
pub mod perm;
pub mod projective;
pub mod rational;
pub mod reference;
pub mod twostate;

pub use field::{abs_value, Felt, FieldError, FieldSpec};
pub use rational::{r, Rational};

use thiserror::Error;

/// Errors surfaced by the model layers above the raw field.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GqmError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operation requires q = {required}, got q = {got}")]
    WrongOrder { required: usize, got: usize },
    #[error("operation requires N = {required}, got N = {got}")]
    WrongLevels { required: usize, got: usize },
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("permutation {0} is not realized by any basis transformation")]
    Unrealizable(String),
    #[error("malformed permutation {0:?}")]
    BadPermutation(String),
    #[error("group is not closed under multiplication")]
    NotClosed,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = GqmError> = std::result::Result<T, E>;
