//! Simulation and verification engine for single-qutrit teleportation over
//! two-qutrit entangled channels.
//!
//! The crate is organised around four layers:
//!
//! - [`linalg`]: dense complex vectors/matrices on 3ⁿ-dimensional spaces
//!   (n ≤ 3), partial trace/transpose and a cyclic-Jacobi Hermitian
//!   eigensolver.
//! - [`states`]: the two entangled channels, the Leslie measurement basis,
//!   collapsed branch states, and the correction operators (both the printed
//!   reference set and operators synthesized from the measurement
//!   projections).
//! - [`protocol`]: the club → measure → communicate → correct pipeline with
//!   reproducible, seedable Monte Carlo sampling.
//! - [`metrics`]: entropy of entanglement, negativity and the
//!   negativity-based teleportation-fidelity benchmark.

pub mod error;
pub mod linalg;
pub mod metrics;
pub mod protocol;
pub mod states;
pub mod tolerance;

#[cfg(test)]
pub(crate) mod tests_support;

pub use error::Error;
pub use linalg::{
    hermitian_eigenvalues, partial_trace, partial_transpose, singular_values, tensor,
    DensityMatrix, Ket, Operator,
};
pub use num_complex::Complex64;
pub use states::{ChannelKind, CorrectionOperator, Provenance, UnknownQutrit};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
