//! Test-only support: an eigenvalue oracle independent of the Jacobi path,
//! plus seeded random inputs.
//!
//! The oracle counts eigenvalues below a shift x through the Sturm sequence
//! of leading-principal-minor characteristic polynomials of H − xI: the
//! sign pattern of the minors (equivalently, the signs of the LDL†
//! elimination pivots) gives the number of eigenvalues strictly below x.
//! Bisection on that count isolates each eigenvalue, multiplicities
//! included, inside the Gershgorin interval.

use num_complex::Complex64;
use qutrit_teleport::linalg::Operator;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_hermitian(r: &mut ChaCha8Rng, dim: usize) -> Operator {
    let mut o = Operator::zeros(dim).unwrap();
    for i in 0..dim {
        o.set(i, i, Complex64::new(2.0 * r.random::<f64>() - 1.0, 0.0));
        for j in (i + 1)..dim {
            let z = Complex64::new(r.random::<f64>() - 0.5, r.random::<f64>() - 0.5);
            o.set(i, j, z);
            o.set(j, i, z.conj());
        }
    }
    o
}

/// Number of eigenvalues of `h` strictly below `x`: negative pivots of the
/// elimination of H − xI, i.e. sign changes along the minor sequence.
fn eigenvalues_below(h: &Operator, x: f64) -> usize {
    let n = h.dim();
    let mut a: Vec<Complex64> = h.entries().to_vec();
    for i in 0..n {
        a[i * n + i] -= Complex64::new(x, 0.0);
    }
    let mut negative = 0;
    for k in 0..n {
        let mut pivot = a[k * n + k].re;
        if pivot.abs() < 1e-150 {
            pivot = -1e-150;
        }
        if pivot < 0.0 {
            negative += 1;
        }
        let pv = Complex64::new(pivot, 0.0);
        for i in (k + 1)..n {
            let f = a[i * n + k] / pv;
            if f.norm_sqr() == 0.0 {
                continue;
            }
            for j in (k + 1)..n {
                let t = f * a[k * n + j];
                a[i * n + j] -= t;
            }
        }
    }
    negative
}

/// All eigenvalues of a Hermitian operator, descending, via Sturm-count
/// bisection. Independent of the Jacobi implementation under test.
pub fn sturm_bisection_eigenvalues(h: &Operator) -> Vec<f64> {
    let n = h.dim();
    let mut radius = 0.0f64;
    for r in 0..n {
        radius = radius.max((0..n).map(|c| h.get(r, c).norm()).sum());
    }
    let (lo0, hi0) = (-radius - 1.0, radius + 1.0);

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (mut lo, mut hi) = (lo0, hi0);
        // invariant: count(lo) <= i < count(hi)
        for _ in 0..120 {
            let mid = 0.5 * (lo + hi);
            if eigenvalues_below(h, mid) > i {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out.reverse();
    out
}
