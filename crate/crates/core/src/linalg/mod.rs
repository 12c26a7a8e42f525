//! Dense complex linear algebra over small Hilbert spaces.
//!
//! States live on tensor products of qutrits (total dimension 3, 9 or 27);
//! operators act on dimension 3 or 9. Both store row-major `Complex64`
//! entries; the flat index of a basis label |a⟩⊗|b⟩⊗|c⟩ is `9a + 3b + c`
//! (leftmost factor most significant).
//!
//! Everything here is an immutable value type: operations return fresh
//! values, and nothing locks, so the whole module is safe to use from any
//! number of threads.

mod eigen;

pub use eigen::{hermitian_eigenvalues, singular_values};

use crate::error::Error;
use crate::tolerance;
use crate::Result;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

fn check_finite(values: &[Complex64], context: &'static str) -> Result<()> {
    if values.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(context))
    }
}

/// A pure state over a labeled tensor factorization of qutrits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ket {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl Ket {
    /// Build a ket from factor dimensions and row-major amplitudes.
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.len() > 3 || dims.iter().any(|&d| d != 3) {
            return Err(Error::Domain(format!(
                "factor dimensions must be 1 to 3 qutrits, got {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::ShapeMismatch {
                context: "amplitude vector length",
                expected: total,
                got: amps.len(),
            });
        }
        check_finite(&amps, "ket amplitudes")?;
        Ok(Self { dims, amps })
    }

    /// Computational basis state |l₀⟩⊗|l₁⟩⊗…, one qutrit per label.
    pub fn computational(labels: &[usize]) -> Result<Self> {
        if labels.iter().any(|&l| l > 2) {
            return Err(Error::Domain(format!("trit labels must be 0..=2, got {labels:?}")));
        }
        let dims = vec![3; labels.len()];
        let total: usize = dims.iter().product();
        let flat = labels.iter().fold(0, |acc, &l| acc * 3 + l);
        let mut amps = vec![ZERO; total];
        amps[flat] = ONE;
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Total Hilbert-space dimension (product of factor dimensions).
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amp(&self, flat: usize) -> Complex64 {
        self.amps[flat]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// True when ‖ψ‖ is within [`tolerance::NORM`] of 1.
    pub fn is_normalized(&self) -> bool {
        (self.norm() - 1.0).abs() <= tolerance::NORM
    }

    /// Unit-norm copy; fails on a (numerically) zero vector.
    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n < 1e-14 {
            return Err(Error::DegenerateInput("cannot normalize a zero vector"));
        }
        Ok(Self {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|z| z / n).collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dims: self.dims.clone(),
            amps: self.amps.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Ket) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::ShapeMismatch {
                context: "ket addition",
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Self::new(
            self.dims.clone(),
            self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        )
    }

    pub fn sub(&self, other: &Ket) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Max entry-wise modulus of the difference with `other`.
    pub fn max_abs_diff(&self, other: &Ket) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// |ψ⟩⟨ψ| as a density matrix.
    pub fn density(&self) -> DensityMatrix {
        let d = self.dim();
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for c in 0..d {
                entries[r * d + c] = self.amps[r] * self.amps[c].conj();
            }
        }
        DensityMatrix(Operator { dim: d, entries })
    }
}

/// Tensor product a ⊗ b under the row-major flat-index convention.
pub fn tensor(a: &Ket, b: &Ket) -> Ket {
    let dims: Vec<usize> = a.dims.iter().chain(b.dims.iter()).copied().collect();
    let mut amps = Vec::with_capacity(a.dim() * b.dim());
    for x in &a.amps {
        for y in &b.amps {
            amps.push(x * y);
        }
    }
    Ket::new(dims, amps).expect("tensor product exceeds three qutrit factors")
}

/// ⟨a|b⟩ = Σ conj(aᵢ)·bᵢ.
pub fn inner(a: &Ket, b: &Ket) -> Result<Complex64> {
    if a.dims != b.dims {
        return Err(Error::ShapeMismatch {
            context: "inner product",
            expected: a.dim(),
            got: b.dim(),
        });
    }
    Ok(a.amps.iter().zip(&b.amps).map(|(x, y)| x.conj() * y).sum())
}

/// Dense complex square matrix acting on a 3- or 9-dimensional space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Operator {
    /// Build from row-major entries; `entries[r*dim + c]` = ⟨r|O|c⟩.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim != 3 && dim != 9 {
            return Err(Error::Domain(format!("operator dimension must be 3 or 9, got {dim}")));
        }
        if entries.len() != dim * dim {
            return Err(Error::ShapeMismatch {
                context: "operator entry count",
                expected: dim * dim,
                got: entries.len(),
            });
        }
        check_finite(&entries, "operator entries")?;
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(dim, vec![ZERO; dim * dim])
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut o = Self::zeros(dim)?;
        for i in 0..dim {
            o.set(i, i, ONE);
        }
        Ok(o)
    }

    /// |a⟩⟨b| scaled outer product of two equal-dimension kets.
    pub fn outer(a: &Ket, b: &Ket) -> Result<Self> {
        if a.dims() != b.dims() {
            return Err(Error::ShapeMismatch {
                context: "outer product",
                expected: a.dim(),
                got: b.dim(),
            });
        }
        let d = a.dim();
        let mut entries = Vec::with_capacity(d * d);
        for r in 0..d {
            for c in 0..d {
                entries.push(a.amp(r) * b.amp(c).conj());
            }
        }
        Self::new(d, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.entries[r * self.dim + c] = v;
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Operator) -> Result<Self> {
        self.zip(other, "operator addition", |a, b| a + b)
    }

    pub fn sub(&self, other: &Operator) -> Result<Self> {
        self.zip(other, "operator subtraction", |a, b| a - b)
    }

    fn zip(
        &self,
        other: &Operator,
        context: &'static str,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch {
                context,
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Matrix product self·other.
    pub fn mul(&self, other: &Operator) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch {
                context: "operator multiplication",
                expected: self.dim,
                got: other.dim,
            });
        }
        let d = self.dim;
        let mut entries = vec![ZERO; d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.get(r, k);
                if a == ZERO {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * other.get(k, c);
                }
            }
        }
        Ok(Self { dim: d, entries })
    }

    /// Kronecker product self ⊗ other (3×3 ⊗ 3×3 → 9×9).
    pub fn kron(&self, other: &Operator) -> Result<Self> {
        let d = self.dim * other.dim;
        let mut entries = vec![ZERO; d * d];
        for r1 in 0..self.dim {
            for c1 in 0..self.dim {
                let a = self.get(r1, c1);
                for r2 in 0..other.dim {
                    for c2 in 0..other.dim {
                        entries[(r1 * other.dim + r2) * d + (c1 * other.dim + c2)] =
                            a * other.get(r2, c2);
                    }
                }
            }
        }
        Self::new(d, entries)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest deviation from Hermitian symmetry, max |O[r,c] − conj(O[c,r])|.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }
}

/// Conjugate transpose.
pub fn dagger(o: &Operator) -> Operator {
    let d = o.dim();
    let mut entries = vec![ZERO; d * d];
    for r in 0..d {
        for c in 0..d {
            entries[r * d + c] = o.get(c, r).conj();
        }
    }
    Operator { dim: d, entries }
}

/// Matrix-vector product O|ψ⟩. The output is not renormalized: non-unitary
/// operators change the norm and callers need the raw value.
pub fn apply(o: &Operator, k: &Ket) -> Result<Ket> {
    if o.dim() != k.dim() {
        return Err(Error::ShapeMismatch {
            context: "operator application",
            expected: o.dim(),
            got: k.dim(),
        });
    }
    let d = o.dim();
    let mut amps = vec![ZERO; d];
    for (r, amp) in amps.iter_mut().enumerate() {
        for c in 0..d {
            *amp += o.get(r, c) * k.amp(c);
        }
    }
    Ket::new(k.dims().to_vec(), amps)
}

/// A Hermitian operator validated at construction time.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(Operator);

impl DensityMatrix {
    /// Wrap an operator after checking Hermiticity at [`tolerance::EQ`].
    pub fn new(op: Operator) -> Result<Self> {
        let defect = op.hermiticity_defect();
        if defect > tolerance::EQ {
            return Err(Error::ContractViolation(format!(
                "density matrix is not Hermitian (defect {defect:.3e})"
            )));
        }
        Ok(Self(op))
    }

    pub fn from_ket(psi: &Ket) -> Self {
        psi.density()
    }

    pub fn op(&self) -> &Operator {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

fn factor_strides(dims: &[usize], party: usize) -> Result<(usize, usize, usize)> {
    if party >= dims.len() {
        return Err(Error::ShapeMismatch {
            context: "factor index",
            expected: dims.len(),
            got: party,
        });
    }
    let before: usize = dims[..party].iter().product();
    let d = dims[party];
    let after: usize = dims[party + 1..].iter().product();
    Ok((before, d, after))
}

/// Reduced density matrix over the `keep`-th factor of `dims`.
///
/// Every other factor is traced out; the trace is preserved.
pub fn partial_trace(rho: &DensityMatrix, keep: usize, dims: &[usize]) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    if rho.dim() != total {
        return Err(Error::ShapeMismatch {
            context: "partial trace dimensions",
            expected: rho.dim(),
            got: total,
        });
    }
    let (before, d, after) = factor_strides(dims, keep)?;
    let mut reduced = Operator::zeros(d)?;
    for r in 0..d {
        for c in 0..d {
            let mut sum = ZERO;
            for b in 0..before {
                for a in 0..after {
                    let row = (b * d + r) * after + a;
                    let col = (b * d + c) * after + a;
                    sum += rho.op().get(row, col);
                }
            }
            reduced.set(r, c, sum);
        }
    }
    DensityMatrix::new(reduced)
}

/// Transpose the indices of one factor only; Hermitian in, Hermitian out,
/// but the result can have negative eigenvalues, so it is a plain operator.
pub fn partial_transpose(rho: &DensityMatrix, party: usize, dims: &[usize]) -> Result<Operator> {
    let total: usize = dims.iter().product();
    if rho.dim() != total {
        return Err(Error::ShapeMismatch {
            context: "partial transpose dimensions",
            expected: rho.dim(),
            got: total,
        });
    }
    let (before, d, after) = factor_strides(dims, party)?;
    let mut out = Operator::zeros(total)?;
    for b_r in 0..before {
        for b_c in 0..before {
            for r in 0..d {
                for c in 0..d {
                    for a_r in 0..after {
                        for a_c in 0..after {
                            let row = (b_r * d + r) * after + a_r;
                            let col = (b_c * d + c) * after + a_c;
                            // swap the party indices (r, c) -> (c, r)
                            let t_row = (b_r * d + c) * after + a_r;
                            let t_col = (b_c * d + r) * after + a_c;
                            out.set(t_row, t_col, rho.op().get(row, col));
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
