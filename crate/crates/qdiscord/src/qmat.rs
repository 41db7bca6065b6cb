//! Dense complex linear algebra for small Hermitian matrices.
//!
//! Everything here is plain `Vec`-backed row-major storage with O(d³)
//! methods; the intended regime is desk-scale bipartite systems
//! (dimension products up to [`DEFAULT_MAX_DIM`]). Index convention for
//! bipartite operators is S-major, A-minor: basis vector |s⟩⊗|a⟩ sits at
//! row `s * d_a + a`. The partial trace and every consumer of it depend
//! on this convention.

use crate::error::{Error, Result};

pub type Complex64 = num_complex::Complex<f64>;

/// Default cap on matrix dimension; `tensor_with_limit` accepts another.
pub const DEFAULT_MAX_DIM: usize = 1024;

/// Max |m − m†| entry allowed before an input counts as non-Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-9;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Which factor of a bipartite S⊗A operator an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    S,
    A,
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries, enforcing the shape and
    /// finiteness invariants.
    pub fn new(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Dimension("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::Dimension(format!(
                "entry count {} does not match dim {}×{}",
                entries.len(),
                dim,
                dim
            )));
        }
        let m = Self { dim, entries };
        if !m.all_finite() {
            return Err(Error::Validation(
                "matrix contains a non-finite entry".into(),
            ));
        }
        Ok(m)
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                entries.push(f(i, j));
            }
        }
        Self { dim, entries }
    }

    /// |u⟩⟨v| for equal-length vectors.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        assert_eq!(u.len(), v.len(), "outer product needs equal lengths");
        Self::from_fn(u.len(), |i, j| u[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn all_finite(&self) -> bool {
        self.entries
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self.get(j, i).conj())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in add");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in sub");
        Self {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "dimension mismatch in matmul");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len(), "dimension mismatch in matvec");
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Largest |self − other| entry.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim, "dimension mismatch in max_abs_diff");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest |m − m†| entry; zero for exactly Hermitian matrices.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Kronecker product with the default dimension cap.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        self.tensor_with_limit(other, DEFAULT_MAX_DIM)
    }

    /// Kronecker product self ⊗ other (self indexes the major, S-side slot).
    pub fn tensor_with_limit(&self, other: &Self, max_dim: usize) -> Result<Self> {
        let dim = self
            .dim
            .checked_mul(other.dim)
            .filter(|&d| d <= max_dim)
            .ok_or_else(|| {
                Error::Dimension(format!(
                    "tensor product dimension {}·{} exceeds maximum {}",
                    self.dim, other.dim, max_dim
                ))
            })?;
        let db = other.dim;
        let mut out = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let aij = self.get(i, j);
                if aij == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        out.set(i * db + k, j * db + l, aij * other.get(k, l));
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Trace out one factor of an S⊗A operator, keeping the other.
///
/// `m.dim` must equal `d_s * d_a`; the result is `d_s`×`d_s` for
/// `keep = S` and `d_a`×`d_a` for `keep = A`. Trace is preserved.
pub fn partial_trace(
    m: &ComplexMatrix,
    dims: (usize, usize),
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    let (d_s, d_a) = dims;
    if d_s == 0 || d_a == 0 || m.dim() != d_s * d_a {
        return Err(Error::Dimension(format!(
            "matrix dim {} does not factor as d_s·d_a = {}·{}",
            m.dim(),
            d_s,
            d_a
        )));
    }
    let out = match keep {
        Subsystem::S => ComplexMatrix::from_fn(d_s, |i, j| {
            (0..d_a).map(|k| m.get(i * d_a + k, j * d_a + k)).sum()
        }),
        Subsystem::A => ComplexMatrix::from_fn(d_a, |i, j| {
            (0..d_s).map(|k| m.get(k * d_a + i, k * d_a + j)).sum()
        }),
    };
    Ok(out)
}

/// Spectral decomposition of a Hermitian matrix.
///
/// Satisfies, within 1e-9: Σ_l λ_l v_l v_l† reconstructs the input, and
/// the eigenvector Gram matrix is the identity.
#[derive(Debug, Clone)]
pub struct HermitianEigenDecomposition {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Columns, ordered to match `eigenvalues`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigenDecomposition {
    /// Σ_l λ_l v_l v_l†.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        ComplexMatrix::from_fn(n, |i, j| {
            (0..n)
                .map(|l| v.get(i, l) * v.get(j, l).conj() * self.eigenvalues[l])
                .sum()
        })
    }

    pub fn eigenvector(&self, l: usize) -> Vec<Complex64> {
        (0..self.eigenvalues.len())
            .map(|i| self.eigenvectors.get(i, l))
            .collect()
    }
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations.
///
/// Deterministic for a fixed input: sweeps run in a fixed (p, q) order
/// and the final sort is stable. Inputs failing the Hermiticity check
/// ([`HERMITICITY_TOL`]) are rejected with a contract violation.
pub fn eig_hermitian(m: &ComplexMatrix) -> Result<HermitianEigenDecomposition> {
    let defect = m.hermiticity_defect();
    if defect > HERMITICITY_TOL {
        return Err(Error::Contract(format!(
            "eig_hermitian input is not Hermitian: max |m - m†| = {defect:.3e}"
        )));
    }
    let n = m.dim();

    // Work on the Hermitian average so a defect within tolerance cannot
    // bias the iteration.
    let mut a = ComplexMatrix::from_fn(n, |i, j| (m.get(i, j) + m.get(j, i).conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);

    let scale = a.frobenius_norm().max(1.0);
    let stop = 1e-14 * scale;

    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off_max = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off_max = off_max.max(a.get(p, q).norm());
            }
        }
        if off_max <= stop {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                jacobi_rotate(&mut a, &mut v, p, q, stop);
            }
        }
    }
    if !converged {
        // One final check: the last sweep may have finished the job.
        let mut off_max = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off_max = off_max.max(a.get(p, q).norm());
            }
        }
        if off_max > stop {
            return Err(Error::Numerical(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps \
                 (residual off-diagonal {off_max:.3e})"
            )));
        }
    }

    // Stable ascending sort of (eigenvalue, column) pairs.
    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).unwrap());

    let eigenvalues: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, |i, l| v.get(i, order[l]));

    Ok(HermitianEigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// One complex Jacobi rotation annihilating a[p][q] (p < q).
///
/// The rotation is the unitary R = I except R_pp = c, R_pq = -s̄,
/// R_qp = s, R_qq = c with real c ≥ 0 and s = t·c·e^{-iφ}, where
/// φ = arg a_pq and t is the smaller root of r·t² - (a_qq - a_pp)·t - r = 0
/// for r = |a_pq|. A ← R†AR, V ← VR.
fn jacobi_rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, stop: f64) {
    let apq = a.get(p, q);
    let r = apq.norm();
    if r <= stop * 0.1 {
        return;
    }
    let h = a.get(q, q).re - a.get(p, p).re;
    let t = {
        let denom = h.abs() + (h * h + 4.0 * r * r).sqrt();
        let mag = 2.0 * r / denom;
        if h > 0.0 {
            -mag
        } else {
            mag
        }
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let sigma = t * c;
    let phase = apq / r; // e^{iφ}
    let s = phase.conj() * sigma;

    let n = a.dim();
    // Column update: A ← A·R.
    for j in 0..n {
        let ajp = a.get(j, p);
        let ajq = a.get(j, q);
        a.set(j, p, ajp * c + ajq * s);
        a.set(j, q, ajp * (-s.conj()) + ajq * c);
    }
    // Row update: A ← R†·A.
    for j in 0..n {
        let apj = a.get(p, j);
        let aqj = a.get(q, j);
        a.set(p, j, apj * c + aqj * s.conj());
        a.set(q, j, apj * (-s) + aqj * c);
    }
    // The rotation zeroes these exactly in exact arithmetic.
    a.set(p, q, Complex64::new(0.0, 0.0));
    a.set(q, p, Complex64::new(0.0, 0.0));
    let app = a.get(p, p);
    let aqq = a.get(q, q);
    a.set(p, p, Complex64::new(app.re, 0.0));
    a.set(q, q, Complex64::new(aqq.re, 0.0));

    // Accumulate eigenvectors: V ← V·R.
    for j in 0..n {
        let vjp = v.get(j, p);
        let vjq = v.get(j, q);
        v.set(j, p, vjp * c + vjq * s);
        v.set(j, q, vjp * (-s.conj()) + vjq * c);
    }
}
