//! Error types shared by every module.

use thiserror::Error;

/// Everything that can go wrong inside the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Vector or matrix dimensions do not line up.
    #[error("shape mismatch: {context} (expected {expected}, got {got})")]
    ShapeMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    /// An argument is outside its documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A vector that must be usable as a state is (numerically) zero.
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    /// A caller-side contract was violated (e.g. a non-Hermitian matrix was
    /// passed to the Hermitian eigensolver).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// An iterative routine failed to converge within its budget.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// A NaN or infinity appeared where only finite values are allowed.
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// The requested channel/mode combination is not defined.
    #[error("configuration error: {0}")]
    Configuration(String),

    /// A projection does not have the phase-scaled permutation structure
    /// required to synthesize a monomial correction operator.
    #[error("structure error: {0}")]
    Structure(String),
}
