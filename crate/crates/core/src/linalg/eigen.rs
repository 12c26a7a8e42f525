//! Hermitian eigenvalues via cyclic Jacobi rotations.
//!
//! For the matrices in this crate (dimension ≤ 9) Jacobi converges
//! unconditionally and keeps the implementation free of shift/deflation
//! logic. Only eigenvalues are computed; eigenvectors are never needed.

use crate::error::Error;
use crate::tolerance;
use crate::Result;
use num_complex::Complex64;

use super::{dagger, Operator};

fn max_off_diagonal(entries: &[Complex64], n: usize) -> f64 {
    let mut worst = 0.0f64;
    for p in 0..n {
        for q in (p + 1)..n {
            worst = worst.max(entries[p * n + q].norm());
        }
    }
    worst
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
///
/// The pivot H[p][q] = |b|·e^{iφ} is zeroed by the unitary that is the
/// identity outside rows/columns p and q and acts there as
/// [[c, −s·e^{iφ}], [s·e^{−iφ}, c]] with tan 2θ chosen from
/// cot 2θ = (H[p][p] − H[q][q]) / (2|b|), |θ| ≤ π/4.
fn rotate(h: &mut [Complex64], n: usize, p: usize, q: usize) {
    let b = h[p * n + q];
    let abs_b = b.norm();
    if abs_b == 0.0 {
        return;
    }
    let phase = b / abs_b;
    let a_pp = h[p * n + p].re;
    let a_qq = h[q * n + q].re;

    let tau = (a_pp - a_qq) / (2.0 * abs_b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // Rows/columns outside the pivot plane.
    for i in 0..n {
        if i == p || i == q {
            continue;
        }
        let h_ip = h[i * n + p];
        let h_iq = h[i * n + q];
        let new_ip = h_ip * c + h_iq * s * phase.conj();
        let new_iq = -h_ip * s * phase + h_iq * c;
        h[i * n + p] = new_ip;
        h[p * n + i] = new_ip.conj();
        h[i * n + q] = new_iq;
        h[q * n + i] = new_iq.conj();
    }

    let shift = 2.0 * c * s * abs_b;
    h[p * n + p] = Complex64::new(c * c * a_pp + s * s * a_qq + shift, 0.0);
    h[q * n + q] = Complex64::new(s * s * a_pp + c * c * a_qq - shift, 0.0);
    h[p * n + q] = Complex64::new(0.0, 0.0);
    h[q * n + p] = Complex64::new(0.0, 0.0);
}

/// All eigenvalues of a Hermitian operator, descending.
///
/// The input must be Hermitian within [`tolerance::HERMITICITY`]; sweeps
/// stop once the largest off-diagonal modulus drops below
/// [`tolerance::JACOBI_OFF_DIAG`]. The eigenvalue sum is checked against
/// the trace at [`tolerance::TRACE_SUM`].
pub fn hermitian_eigenvalues(o: &Operator) -> Result<Vec<f64>> {
    let defect = o.hermiticity_defect();
    if defect > tolerance::HERMITICITY {
        return Err(Error::ContractViolation(format!(
            "eigensolver input is not Hermitian (defect {defect:.3e})"
        )));
    }

    let n = o.dim();
    let mut h: Vec<Complex64> = o.entries().to_vec();
    // Symmetrize once so rotations see an exactly Hermitian matrix.
    for p in 0..n {
        h[p * n + p] = Complex64::new(h[p * n + p].re, 0.0);
        for q in (p + 1)..n {
            let avg = (h[p * n + q] + h[q * n + p].conj()) * 0.5;
            h[p * n + q] = avg;
            h[q * n + p] = avg.conj();
        }
    }

    let mut converged = false;
    for _ in 0..tolerance::JACOBI_MAX_SWEEPS {
        if max_off_diagonal(&h, n) <= tolerance::JACOBI_OFF_DIAG {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut h, n, p, q);
            }
        }
    }
    if !converged && max_off_diagonal(&h, n) > tolerance::JACOBI_OFF_DIAG {
        return Err(Error::Numerical(format!(
            "Jacobi sweeps did not converge within {} sweeps",
            tolerance::JACOBI_MAX_SWEEPS
        )));
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| h[i * n + i].re).collect();
    eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));

    let trace = o.trace().re;
    let sum: f64 = eigenvalues.iter().sum();
    if (sum - trace).abs() > tolerance::TRACE_SUM {
        return Err(Error::Numerical(format!(
            "eigenvalue sum {sum:.15e} deviates from trace {trace:.15e}"
        )));
    }
    Ok(eigenvalues)
}

/// Singular values: square roots of the eigenvalues of O†O, descending.
pub fn singular_values(o: &Operator) -> Result<Vec<f64>> {
    let gram = dagger(o).mul(o)?;
    let eigenvalues = hermitian_eigenvalues(&gram)?;
    Ok(eigenvalues
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tests_support::{random_hermitian, rng};
    use num_complex::Complex64;

    fn diag(values: &[f64]) -> Operator {
        let mut o = Operator::zeros(values.len()).unwrap();
        for (i, &v) in values.iter().enumerate() {
            o.set(i, i, Complex64::new(v, 0.0));
        }
        o
    }

    #[test]
    fn diagonal_matrices_are_trivial() {
        let e = hermitian_eigenvalues(&diag(&[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0])).unwrap();
        assert_eq!(e, vec![2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0]);

        let third = diag(&[1.0 / 3.0; 3]);
        assert_eq!(hermitian_eigenvalues(&third).unwrap(), vec![1.0 / 3.0; 3]);
    }

    #[test]
    fn two_by_two_block_hand_check() {
        // [[0, i], [-i, 0]] embedded in 3x3 has eigenvalues {1, 0, -1}.
        let mut o = Operator::zeros(3).unwrap();
        o.set(0, 1, Complex64::new(0.0, 1.0));
        o.set(1, 0, Complex64::new(0.0, -1.0));
        let e = hermitian_eigenvalues(&o).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-13);
        assert!(e[1].abs() < 1e-13);
        assert!((e[2] + 1.0).abs() < 1e-13);
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let mut r = rng(21);
        for _ in 0..25 {
            let h = random_hermitian(&mut r, 9);
            let e = hermitian_eigenvalues(&h).unwrap();
            let sum: f64 = e.iter().sum();
            assert!((sum - h.trace().re).abs() < 1e-10);
        }
    }

    #[test]
    fn rejects_non_hermitian_input() {
        let mut o = Operator::zeros(3).unwrap();
        o.set(0, 1, Complex64::new(1.0, 0.0));
        assert!(matches!(
            hermitian_eigenvalues(&o),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn singular_values_of_phase_diagonal_are_unit() {
        let mut u = Operator::zeros(3).unwrap();
        for t in 0..3i64 {
            u.set(
                t as usize,
                t as usize,
                Complex64::from_polar(1.0, std::f64::consts::TAU * t as f64 / 3.0),
            );
        }
        let s = singular_values(&u).unwrap();
        for v in s {
            assert!((v - 1.0).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_values_of_scaled_diagonal() {
        let s = singular_values(&diag(&[-0.5, 1.0, 1.0])).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-13);
        assert!((s[1] - 1.0).abs() < 1e-13);
        assert!((s[2] - 0.5).abs() < 1e-13);
    }
}
