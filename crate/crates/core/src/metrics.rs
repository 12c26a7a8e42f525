//! Entanglement and fidelity metrics for two-qutrit pure states.
//!
//! Entropy is reported in bits (base-2 logarithm): the reference values
//! 1.585 = log₂3 and 1.252 for the two channels are base-2 numbers, so the
//! base-3 form sometimes quoted next to them is not used here.

use crate::error::Error;
use crate::linalg::{hermitian_eigenvalues, partial_trace, partial_transpose, Ket};
use crate::states::{channel, ChannelKind};
use crate::tolerance;
use crate::Result;
use serde::{Deserialize, Serialize};

/// Entropy, negativity and fidelity of one channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelReport {
    pub kind: ChannelKind,
    pub entropy_bits: f64,
    pub negativity: f64,
    /// Negativity-based benchmark (1 + N)/2.
    pub fidelity_from_negativity: f64,
    /// Descending; squares sum to 1.
    pub schmidt_coefficients: [f64; 3],
}

fn two_qutrit_checked(psi: &Ket) -> Result<()> {
    if psi.dims() != [3, 3] {
        return Err(Error::ShapeMismatch {
            context: "two-qutrit state",
            expected: 9,
            got: psi.dim(),
        });
    }
    if !psi.is_normalized() {
        return Err(Error::ContractViolation(format!(
            "state norm is {:.15}, expected 1",
            psi.norm()
        )));
    }
    Ok(())
}

/// Eigenvalues of either reduced density matrix, descending, with small
/// negative drift clamped to zero.
fn reduced_eigenvalues(psi: &Ket) -> Result<Vec<f64>> {
    let reduced = partial_trace(&psi.density(), 0, &[3, 3])?;
    hermitian_eigenvalues(reduced.op())?
        .into_iter()
        .map(|l| {
            if l < -tolerance::EIGENVALUE_NEGATIVE {
                Err(Error::ContractViolation(format!(
                    "reduced state has eigenvalue {l:.3e} below zero"
                )))
            } else if l < 0.0 {
                Ok(0.0)
            } else {
                Ok(l)
            }
        })
        .collect()
}

/// Von Neumann entropy of the reduced state, in bits, with 0·log 0 = 0.
pub fn entropy_of_entanglement(psi: &Ket) -> Result<f64> {
    two_qutrit_checked(psi)?;
    Ok(reduced_eigenvalues(psi)?
        .into_iter()
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.log2())
        .sum())
}

/// Schmidt coefficients: square roots of the reduced eigenvalues, descending.
pub fn schmidt_coefficients(psi: &Ket) -> Result<[f64; 3]> {
    two_qutrit_checked(psi)?;
    let eigenvalues = reduced_eigenvalues(psi)?;
    Ok([
        eigenvalues[0].sqrt(),
        eigenvalues[1].sqrt(),
        eigenvalues[2].sqrt(),
    ])
}

/// Negativity N = Σ_j (|λ_j| − λ_j)/2 over the partial-transpose spectrum.
///
/// For a pure state this equals Σ_{i<j} c_i·c_j in Schmidt coefficients;
/// both routes are computed and must agree to 1e-9.
pub fn negativity(psi: &Ket) -> Result<f64> {
    two_qutrit_checked(psi)?;
    let pt = partial_transpose(&psi.density(), 0, &[3, 3])?;
    let from_spectrum: f64 = hermitian_eigenvalues(&pt)?
        .into_iter()
        .map(|l| (l.abs() - l) / 2.0)
        .sum();

    let c = schmidt_coefficients(psi)?;
    let closed_form = c[0] * c[1] + c[0] * c[2] + c[1] * c[2];
    if (from_spectrum - closed_form).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "negativity routes disagree: spectrum {from_spectrum:.12e} vs Schmidt {closed_form:.12e}"
        )));
    }
    Ok(from_spectrum)
}

/// The benchmark fidelity (1 + N)/2.
pub fn fidelity_from_negativity(n: f64) -> Result<f64> {
    if n < 0.0 {
        return Err(Error::Domain(format!("negativity must be nonnegative, got {n}")));
    }
    Ok((1.0 + n) / 2.0)
}

/// Reports for both channels, every figure recomputed from the state.
pub fn channel_reports() -> Result<Vec<ChannelReport>> {
    ChannelKind::ALL
        .iter()
        .map(|&kind| {
            let psi = channel(kind);
            let n = negativity(&psi)?;
            Ok(ChannelReport {
                kind,
                entropy_bits: entropy_of_entanglement(&psi)?,
                negativity: n,
                fidelity_from_negativity: fidelity_from_negativity(n)?,
                schmidt_coefficients: schmidt_coefficients(&psi)?,
            })
        })
        .collect()
}
