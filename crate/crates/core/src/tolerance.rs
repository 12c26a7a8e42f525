//! Numeric tolerances used throughout the crate.
//!
//! All state and operator entries in this problem are O(1), so the
//! thresholds below are absolute.

/// Entry-wise equality of states, operators and Gram matrices.
pub const EQ: f64 = 1e-12;

/// Acceptable deviation of a normalized state's norm from 1.
pub const NORM: f64 = 1e-12;

/// Hermiticity check before diagonalization.
pub const HERMITICITY: f64 = 1e-10;

/// Jacobi sweep convergence: largest off-diagonal modulus.
pub const JACOBI_OFF_DIAG: f64 = 1e-13;

/// Maximum number of cyclic Jacobi sweeps before giving up.
pub const JACOBI_MAX_SWEEPS: usize = 50;

/// Eigenvalue sum must match the trace this closely.
pub const TRACE_SUM: f64 = 1e-10;

/// Residual threshold for retrieval audits (exact and proportional).
pub const AUDIT_RESIDUAL: f64 = 1e-9;

/// Reduced-state eigenvalues below zero by more than this are a hard error;
/// anything in `[-CLAMP, 0)` is clamped to zero before entropy sums.
pub const EIGENVALUE_CLAMP: f64 = 1e-12;
pub const EIGENVALUE_NEGATIVE: f64 = 1e-10;

/// Coefficient-triple normalization accepted by [`crate::UnknownQutrit`].
pub const QUTRIT_NORM: f64 = 1e-9;
