//! Named states and operators of the teleportation scheme.
//!
//! Two entangled two-qutrit channels are supported:
//!
//! - `Unitary`: (|00⟩ + |11⟩ + |22⟩)/√3, retrieved with unitary corrections;
//! - `NonUnitary`: (−2|00⟩ + |11⟩ + |22⟩)/√6, whose corrections cannot all
//!   be unitary.
//!
//! Alice measures her two qutrits in the Leslie basis, the nine maximally
//! entangled states Ψ^{3s+p} = (1/√3) Σ_t ω^{pt} |t⟩|t+s mod 3⟩ with
//! ω = e^{i2π/3}. Collapsed branch states on Bob's side are always computed
//! by projecting the clubbed state onto a basis element; the printed
//! reference forms of those branches are kept as data so audits can compare
//! them against the projection.

mod corrections;

pub use corrections::{
    audit_retrievals, audit_synthesized, channel_audit, printed_correction, probe_states,
    synthesize_correction, AuditEntry, AuditWitness, ChannelAudit, CorrectionOperator,
    OutcomeAudit, Provenance, PROBE_SET_VERSION,
};

use crate::error::Error;
use crate::linalg::{inner, tensor, Ket, Operator};
use crate::tolerance;
use crate::Result;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::fmt;

/// ω^n for ω = e^{i2π/3}; exponents are taken mod 3.
pub(crate) fn phase(thirds: i64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (thirds.rem_euclid(3) as f64) / 3.0)
}

fn check_outcome(k: usize) -> Result<()> {
    if k > 8 {
        return Err(Error::Domain(format!("measurement outcome must be 0..=8, got {k}")));
    }
    Ok(())
}

/// Which entangled channel Alice and Bob share.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ChannelKind {
    /// Channel retrieved by unitary corrections.
    #[serde(rename = "u")]
    Unitary,
    /// Channel whose retrieval operators are non-unitary.
    #[serde(rename = "nu")]
    NonUnitary,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 2] = [ChannelKind::Unitary, ChannelKind::NonUnitary];

    /// Signed amplitudes on |00⟩, |11⟩, |22⟩ before normalization.
    fn weights(self) -> [f64; 3] {
        match self {
            ChannelKind::Unitary => [1.0, 1.0, 1.0],
            ChannelKind::NonUnitary => [-2.0, 1.0, 1.0],
        }
    }

    /// Scale between a raw branch projection and its printed reference form:
    /// 3 for the unitary channel, √18 for the non-unitary one.
    pub fn branch_scale(self) -> f64 {
        match self {
            ChannelKind::Unitary => 3.0,
            ChannelKind::NonUnitary => 18.0f64.sqrt(),
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChannelKind::Unitary => write!(f, "u"),
            ChannelKind::NonUnitary => write!(f, "nu"),
        }
    }
}

/// The unknown single qutrit α|0⟩ + β|1⟩ + γ|2⟩ that Alice wants to send.
#[derive(Debug, Clone, PartialEq)]
pub struct UnknownQutrit {
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
}

impl UnknownQutrit {
    /// Build from coefficients that are already normalized
    /// (norm within [`tolerance::QUTRIT_NORM`] of 1); the stored
    /// coefficients are rescaled to unit norm exactly.
    pub fn new(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<Self> {
        let ket = Ket::new(vec![3], vec![alpha, beta, gamma])?;
        let norm = ket.norm();
        if norm < 1e-14 {
            return Err(Error::DegenerateInput("qutrit coefficients are all zero"));
        }
        if (norm - 1.0).abs() > tolerance::QUTRIT_NORM {
            return Err(Error::Domain(format!(
                "qutrit coefficients have norm {norm:.12}, expected 1"
            )));
        }
        Self::new_normalized(alpha, beta, gamma)
    }

    /// Build from arbitrary nonzero coefficients, normalizing them.
    pub fn new_normalized(alpha: Complex64, beta: Complex64, gamma: Complex64) -> Result<Self> {
        let ket = Ket::new(vec![3], vec![alpha, beta, gamma])?;
        let ket = ket.normalized()?;
        Ok(Self {
            alpha: ket.amp(0),
            beta: ket.amp(1),
            gamma: ket.amp(2),
        })
    }

    /// Computational basis qutrit |t⟩.
    pub fn basis(t: usize) -> Result<Self> {
        let mut c = [Complex64::ZERO; 3];
        *c.get_mut(t)
            .ok_or_else(|| Error::Domain(format!("basis label must be 0..=2, got {t}")))? =
            Complex64::ONE;
        Self::new(c[0], c[1], c[2])
    }

    /// (|0⟩ + |1⟩ + |2⟩)/√3.
    pub fn uniform() -> Self {
        let a = Complex64::new(1.0 / 3.0f64.sqrt(), 0.0);
        Self { alpha: a, beta: a, gamma: a }
    }

    /// Haar-random qutrit: three complex standard normals, normalized.
    pub fn haar(rng: &mut impl Rng) -> Self {
        loop {
            let mut draw = || {
                Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
            };
            let (a, b, c) = (draw(), draw(), draw());
            if let Ok(q) = Self::new_normalized(a, b, c) {
                return q;
            }
        }
    }

    pub fn components(&self) -> [Complex64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    /// The dimension-3 ket (α, β, γ).
    pub fn ket(&self) -> Ket {
        Ket::new(vec![3], vec![self.alpha, self.beta, self.gamma])
            .expect("validated at construction")
    }
}

/// The shared entangled channel as a normalized two-qutrit ket.
pub fn channel(kind: ChannelKind) -> Ket {
    let w = kind.weights();
    let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut amps = vec![Complex64::ZERO; 9];
    for (t, &wt) in w.iter().enumerate() {
        amps[3 * t + t] = Complex64::new(wt / norm, 0.0);
    }
    Ket::new(vec![3, 3], amps).expect("channel amplitudes are finite")
}

/// The k-th Leslie basis state, k = 3s + p:
/// (1/√3) Σ_t e^{i2πpt/3} |t⟩|t+s mod 3⟩.
pub fn leslie_state(k: usize) -> Result<Ket> {
    check_outcome(k)?;
    let (shift, p) = (k / 3, (k % 3) as i64);
    let mut amps = vec![Complex64::ZERO; 9];
    let inv_sqrt3 = 1.0 / 3.0f64.sqrt();
    for t in 0..3usize {
        amps[3 * t + (t + shift) % 3] = phase(p * t as i64) * inv_sqrt3;
    }
    Ket::new(vec![3, 3], amps)
}

/// Expansion of the computational state |b⟩|c⟩ in the Leslie basis.
///
/// Coefficients are the inner products ⟨Ψ^k | b,c⟩; exactly three are
/// nonzero, each of modulus 1/√3.
pub fn computational_from_leslie(b: usize, c: usize) -> Result<Vec<(usize, Complex64)>> {
    if b > 2 || c > 2 {
        return Err(Error::Domain(format!("trit labels must be 0..=2, got ({b}, {c})")));
    }
    let target = Ket::computational(&[b, c])?;
    let mut terms = Vec::with_capacity(3);
    for k in 0..9 {
        let coeff = inner(&leslie_state(k)?, &target)?;
        if coeff.norm() > 1e-9 {
            terms.push((k, coeff));
        }
    }
    Ok(terms)
}

/// Bob's raw conditional state for outcome k: (⟨Ψ^k| ⊗ I) (φ ⊗ channel).
///
/// No rescaling is applied, so ‖result‖² is the Born probability of the
/// outcome. Multiply by [`ChannelKind::branch_scale`] to recover the printed
/// reference convention.
pub fn collapsed_state(kind: ChannelKind, k: usize, phi: &UnknownQutrit) -> Result<Ket> {
    check_outcome(k)?;
    let xi = tensor(&phi.ket(), &channel(kind));
    let basis = leslie_state(k)?;
    let mut amps = vec![Complex64::ZERO; 3];
    for (c, amp) in amps.iter_mut().enumerate() {
        for a in 0..3 {
            for b in 0..3 {
                *amp += basis.amp(3 * a + b).conj() * xi.amp(9 * a + 3 * b + c);
            }
        }
    }
    Ket::new(vec![3], amps)
}

/// Linear map φ ↦ branch state for outcome k, in the printed reference
/// scale, derived from first principles by projecting basis inputs.
pub fn branch_matrix(kind: ChannelKind, k: usize) -> Result<Operator> {
    let scale = Complex64::new(kind.branch_scale(), 0.0);
    let mut m = Operator::zeros(3)?;
    for a in 0..3 {
        let col = collapsed_state(kind, k, &UnknownQutrit::basis(a)?)?.scale(scale);
        for j in 0..3 {
            m.set(j, a, col.amp(j));
        }
    }
    Ok(m)
}

/// Entry tables transcribed from the printed branch states: each entry is
/// (row, column, real scale, power of ω).
type MonomialTable = [(usize, usize, f64, i64); 3];

const PRINTED_BRANCH_U: [MonomialTable; 9] = [
    [(0, 0, 1.0, 0), (1, 1, 1.0, 0), (2, 2, 1.0, 0)],
    [(0, 0, 1.0, 0), (1, 1, 1.0, 2), (2, 2, 1.0, 1)],
    [(0, 0, 1.0, 0), (1, 1, 1.0, 1), (2, 2, 1.0, 2)],
    [(0, 2, 1.0, 0), (1, 0, 1.0, 0), (2, 1, 1.0, 0)],
    [(0, 2, 1.0, 1), (1, 0, 1.0, 0), (2, 1, 1.0, 2)],
    [(0, 2, 1.0, 2), (1, 0, 1.0, 0), (2, 1, 1.0, 1)],
    [(0, 1, 1.0, 0), (1, 2, 1.0, 0), (2, 0, 1.0, 0)],
    [(0, 1, 1.0, 2), (1, 2, 1.0, 1), (2, 0, 1.0, 0)],
    [(0, 1, 1.0, 1), (1, 2, 1.0, 2), (2, 0, 1.0, 0)],
];

const PRINTED_BRANCH_NU: [MonomialTable; 9] = [
    [(0, 0, -2.0, 0), (1, 1, 1.0, 0), (2, 2, 1.0, 0)],
    [(0, 0, -2.0, 0), (1, 1, 1.0, 2), (2, 2, 1.0, 1)],
    [(0, 0, -2.0, 0), (1, 1, 1.0, 1), (2, 2, 1.0, 2)],
    // sign of the first term differs from the projection
    [(0, 2, 2.0, 0), (1, 0, 1.0, 0), (2, 1, 1.0, 0)],
    // the 1/2 on the last term differs from the projection
    [(0, 2, -2.0, 1), (1, 0, 1.0, 0), (2, 1, 0.5, 2)],
    [(0, 2, -2.0, 2), (1, 0, 1.0, 0), (2, 1, 1.0, 1)],
    [(0, 1, -2.0, 0), (1, 2, 1.0, 0), (2, 0, 1.0, 0)],
    [(0, 1, -2.0, 2), (1, 2, 1.0, 1), (2, 0, 1.0, 0)],
    [(0, 1, -2.0, 1), (1, 2, 1.0, 2), (2, 0, 1.0, 0)],
];

pub(crate) fn monomial_operator(table: &MonomialTable) -> Operator {
    let mut m = Operator::zeros(3).expect("3x3");
    for &(row, col, scale, thirds) in table {
        m.set(row, col, phase(thirds) * scale);
    }
    m
}

/// The branch state map exactly as printed in the reference tables
/// (same layout as [`branch_matrix`], not derived from projection).
pub fn printed_branch_matrix(kind: ChannelKind, k: usize) -> Result<Operator> {
    check_outcome(k)?;
    let table = match kind {
        ChannelKind::Unitary => &PRINTED_BRANCH_U[k],
        ChannelKind::NonUnitary => &PRINTED_BRANCH_NU[k],
    };
    Ok(monomial_operator(table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{apply, dagger, inner, Operator};
    use crate::tests_support::rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn unknown_qutrit_accepts_unit_triples() {
        let q = UnknownQutrit::new(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_eq!(q.ket().amp(0), Complex64::ONE);

        let u = UnknownQutrit::uniform();
        assert!((u.ket().norm() - 1.0).abs() < 1e-15);

        // 0.36 + 0.64 = 1 with an imaginary middle component
        let q = UnknownQutrit::new(c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)).unwrap();
        assert!((q.ket().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unknown_qutrit_rejects_bad_triples() {
        assert!(matches!(
            UnknownQutrit::new(Complex64::ZERO, Complex64::ZERO, Complex64::ZERO),
            Err(Error::DegenerateInput(_))
        ));
        assert!(UnknownQutrit::new(c(0.9, 0.0), c(0.0, 0.0), c(0.0, 0.0)).is_err());
        assert!(UnknownQutrit::new_normalized(c(2.0, 0.0), c(0.0, 2.0), c(1.0, 0.0)).is_ok());
    }

    #[test]
    fn channel_amplitudes_match_definitions() {
        let u = channel(ChannelKind::Unitary);
        let s3 = 1.0 / 3.0f64.sqrt();
        for idx in [0, 4, 8] {
            assert!((u.amp(idx) - c(s3, 0.0)).norm() < 1e-15);
        }
        let nu = channel(ChannelKind::NonUnitary);
        let s6 = 1.0 / 6.0f64.sqrt();
        assert!((nu.amp(0) - c(-2.0 * s6, 0.0)).norm() < 1e-15);
        assert!((nu.amp(4) - c(s6, 0.0)).norm() < 1e-15);
        assert!((nu.amp(8) - c(s6, 0.0)).norm() < 1e-15);
        assert!((nu.norm() - 1.0).abs() < 1e-15);
        assert!(inner(&u, &nu).unwrap().norm() < 1e-15);
    }

    #[test]
    fn leslie_zero_is_the_unitary_channel() {
        assert!(leslie_state(0).unwrap().max_abs_diff(&channel(ChannelKind::Unitary)) < 1e-15);
    }

    #[test]
    fn leslie_three_shifts_the_second_qutrit() {
        let psi = leslie_state(3).unwrap();
        let s3 = 1.0 / 3.0f64.sqrt();
        for idx in [1, 5, 6] {
            assert!((psi.amp(idx) - c(s3, 0.0)).norm() < 1e-15);
        }
        assert!((psi.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn leslie_rejects_out_of_range() {
        assert!(matches!(leslie_state(9), Err(Error::Domain(_))));
    }

    #[test]
    fn leslie_gram_matrix_is_identity() {
        for j in 0..9 {
            for k in 0..9 {
                let g = inner(&leslie_state(j).unwrap(), &leslie_state(k).unwrap()).unwrap();
                let expected = if j == k { Complex64::ONE } else { Complex64::ZERO };
                assert!((g - expected).norm() < 1e-12, "Gram[{j}][{k}] = {g}");
            }
        }
    }

    #[test]
    fn leslie_completeness_sums_to_identity() {
        let mut sum = Operator::zeros(9).unwrap();
        for k in 0..9 {
            let psi = leslie_state(k).unwrap();
            sum = sum.add(&Operator::outer(&psi, &psi).unwrap()).unwrap();
        }
        assert!(sum.max_abs_diff(&Operator::identity(9).unwrap()) < 1e-12);
    }

    #[test]
    fn computational_expansion_of_ground_state() {
        let terms = computational_from_leslie(0, 0).unwrap();
        let s3 = 1.0 / 3.0f64.sqrt();
        assert_eq!(terms.len(), 3);
        for (expected_k, (k, coeff)) in [0usize, 1, 2].iter().zip(&terms) {
            assert_eq!(expected_k, k);
            assert!((coeff - c(s3, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn computational_expansion_of_two_one() {
        // |2⟩|1⟩ lands on Ψ⁶, Ψ⁷, Ψ⁸ with phases 1, ω, ω².
        let terms = computational_from_leslie(2, 1).unwrap();
        let s3 = 1.0 / 3.0f64.sqrt();
        let expected = [(6, phase(0)), (7, phase(1)), (8, phase(2))];
        for ((k, coeff), (ek, ephase)) in terms.iter().zip(expected) {
            assert_eq!(*k, ek);
            assert!((coeff - ephase * s3).norm() < 1e-15);
        }
    }

    #[test]
    fn computational_expansions_resum() {
        for b in 0..3 {
            for cc in 0..3 {
                let mut resum = Ket::new(vec![3, 3], vec![Complex64::ZERO; 9]).unwrap();
                for (k, coeff) in computational_from_leslie(b, cc).unwrap() {
                    resum = resum.add(&leslie_state(k).unwrap().scale(coeff)).unwrap();
                }
                let target = Ket::computational(&[b, cc]).unwrap();
                assert!(resum.max_abs_diff(&target) < 1e-12);
            }
        }
    }

    #[test]
    fn collapsed_state_of_unitary_outcome_zero_is_phi_over_three() {
        let mut r = rng(31);
        for _ in 0..10 {
            let phi = UnknownQutrit::haar(&mut r);
            let s = collapsed_state(ChannelKind::Unitary, 0, &phi).unwrap();
            let expected = phi.ket().scale(c(1.0 / 3.0, 0.0));
            assert!(s.max_abs_diff(&expected) < 1e-14);
        }
    }

    #[test]
    fn collapsed_state_of_non_unitary_outcome_zero() {
        let phi = UnknownQutrit::new_normalized(c(0.3, 0.1), c(-0.5, 0.2), c(0.7, 0.0)).unwrap();
        let [a, b, g] = phi.components();
        let s = collapsed_state(ChannelKind::NonUnitary, 0, &phi)
            .unwrap()
            .scale(c(ChannelKind::NonUnitary.branch_scale(), 0.0));
        assert!((s.amp(0) - a * -2.0).norm() < 1e-13);
        assert!((s.amp(1) - b).norm() < 1e-13);
        assert!((s.amp(2) - g).norm() < 1e-13);
    }

    #[test]
    fn printed_branches_match_projection_except_two_entries() {
        for kind in ChannelKind::ALL {
            for k in 0..9 {
                let diff = printed_branch_matrix(kind, k)
                    .unwrap()
                    .max_abs_diff(&branch_matrix(kind, k).unwrap());
                match (kind, k) {
                    (ChannelKind::NonUnitary, 3) => assert!((diff - 4.0).abs() < 1e-12),
                    (ChannelKind::NonUnitary, 4) => assert!((diff - 0.5).abs() < 1e-12),
                    _ => assert!(diff < 1e-12, "kind {kind} outcome {k}: diff {diff}"),
                }
            }
        }
    }

    #[test]
    fn branch_matrices_are_isometries_up_to_channel_weights() {
        // M†M is diagonal with the squared channel weights permuted.
        for kind in ChannelKind::ALL {
            for k in 0..9 {
                let m = branch_matrix(kind, k).unwrap();
                let gram = dagger(&m).mul(&m).unwrap();
                for r in 0..3 {
                    for cc in 0..3 {
                        if r != cc {
                            assert!(gram.get(r, cc).norm() < 1e-12);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn collapsed_state_applies_branch_matrix() {
        let mut r = rng(32);
        for kind in ChannelKind::ALL {
            for k in 0..9 {
                let phi = UnknownQutrit::haar(&mut r);
                let via_projection = collapsed_state(kind, k, &phi)
                    .unwrap()
                    .scale(c(kind.branch_scale(), 0.0));
                let via_matrix = apply(&branch_matrix(kind, k).unwrap(), &phi.ket()).unwrap();
                assert!(via_projection.max_abs_diff(&via_matrix) < 1e-12);
            }
        }
    }
}
