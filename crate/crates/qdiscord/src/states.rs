//! Bipartite density matrices, measurement bases, named example states,
//! parametric families, seeded random states, and the unread-measurement
//! (dephasing) channel.

use num_complex::Complex;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    partial_trace, Complex64, ComplexMatrix, Subsystem, DEFAULT_MAX_DIM, HERMITICITY_TOL,
};

/// |trace − 1| allowed for a valid state.
pub const TRACE_TOL: f64 = 1e-9;

/// Eigenvalues of a valid state must be ≥ −PSD_TOL; values in
/// [−PSD_TOL, 0) are treated as 0 by downstream consumers.
pub const PSD_TOL: f64 = 1e-9;

/// Max deviation of a basis Gram matrix from the identity.
pub const ORTHONORMALITY_TOL: f64 = 1e-9;

/// Hermitian, positive semidefinite, unit-trace operator on S⊗A with a
/// recorded dimension split. Single-system states use `d_a = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    d_s: usize,
    d_a: usize,
}

impl DensityMatrix {
    /// Validates every invariant; the error message names the violated one.
    pub fn new(matrix: ComplexMatrix, d_s: usize, d_a: usize) -> Result<Self> {
        if d_s == 0 || d_a == 0 {
            return Err(Error::Validation(
                "subsystem dimensions must be positive".into(),
            ));
        }
        let dim = d_s
            .checked_mul(d_a)
            .filter(|&d| d <= DEFAULT_MAX_DIM)
            .ok_or_else(|| {
                Error::Validation(format!(
                    "product dimension {d_s}·{d_a} exceeds maximum {DEFAULT_MAX_DIM}"
                ))
            })?;
        if matrix.dim() != dim {
            return Err(Error::Validation(format!(
                "matrix dimension {} does not equal d_s·d_a = {}",
                matrix.dim(),
                dim
            )));
        }
        if !matrix.all_finite() {
            return Err(Error::Validation(
                "matrix contains a non-finite entry".into(),
            ));
        }
        let defect = matrix.hermiticity_defect();
        if defect > HERMITICITY_TOL {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian: max |ρ − ρ†| = {defect:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Validation(format!(
                "trace {tr} deviates from 1 beyond {TRACE_TOL:.0e}"
            )));
        }
        let eig = crate::qmat::eig_hermitian(&matrix)?;
        if let Some(&lo) = eig.eigenvalues.iter().find(|&&l| l < -PSD_TOL) {
            return Err(Error::Validation(format!(
                "eigenvalue {lo:.3e} is below −{PSD_TOL:.0e}: matrix is not positive semidefinite"
            )));
        }
        Ok(Self { matrix, d_s, d_a })
    }

    /// Constructor for matrices valid by construction (conditionals,
    /// channel outputs). Invariants are checked only in debug builds.
    pub(crate) fn from_valid_parts(matrix: ComplexMatrix, d_s: usize, d_a: usize) -> Self {
        debug_assert!(matrix.dim() == d_s * d_a);
        debug_assert!(matrix.hermiticity_defect() <= 1e-7);
        debug_assert!((matrix.trace().re - 1.0).abs() <= 1e-7);
        Self { matrix, d_s, d_a }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Marginal state of one subsystem (tagged as a single system).
    pub fn marginal(&self, keep: Subsystem) -> DensityMatrix {
        let m = partial_trace(&self.matrix, (self.d_s, self.d_a), keep)
            .expect("marginal: split is valid by construction");
        let d = m.dim();
        DensityMatrix::from_valid_parts(m, d, 1)
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for i in 0..n {
            for j in 0..n {
                acc += (self.matrix.get(i, j) * self.matrix.get(j, i)).re;
            }
        }
        acc
    }

    /// Eigenvalues with PSD drift clipped: values in [−PSD_TOL, 0) → 0.
    pub fn eigenvalues_clipped(&self) -> Vec<f64> {
        let eig =
            crate::qmat::eig_hermitian(&self.matrix).expect("state is Hermitian by construction");
        eig.eigenvalues
            .into_iter()
            .map(|l| if l < 0.0 { 0.0 } else { l })
            .collect()
    }

    /// Exchanges the two subsystems: the result has split (d_a, d_s) and
    /// entries ρ'[(a,s),(a',s')] = ρ[(s,a),(s',a')].
    pub fn swap_sides(&self) -> DensityMatrix {
        let (d_s, d_a) = (self.d_s, self.d_a);
        let m = ComplexMatrix::from_fn(self.dim(), |row, col| {
            let (a, s) = (row / d_s, row % d_s);
            let (a2, s2) = (col / d_s, col % d_s);
            self.matrix.get(s * d_a + a, s2 * d_a + a2)
        });
        DensityMatrix::from_valid_parts(m, d_a, d_s)
    }
}

/// Ordered orthonormal rank-1 projective measurement basis on the
/// apparatus subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementBasis {
    d_a: usize,
    vectors: Vec<Vec<Complex64>>,
}

impl MeasurementBasis {
    /// Validates completeness and pairwise orthonormality.
    pub fn new(vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let d_a = vectors.len();
        if d_a == 0 {
            return Err(Error::Validation("basis must contain vectors".into()));
        }
        for v in &vectors {
            if v.len() != d_a {
                return Err(Error::Validation(format!(
                    "basis vector length {} does not match basis size {}",
                    v.len(),
                    d_a
                )));
            }
            if !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::Validation(
                    "basis vector contains a non-finite entry".into(),
                ));
            }
        }
        for i in 0..d_a {
            for j in i..d_a {
                let inner: Complex64 = vectors[i]
                    .iter()
                    .zip(&vectors[j])
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let target = if i == j { 1.0 } else { 0.0 };
                if (inner - Complex64::new(target, 0.0)).norm() > ORTHONORMALITY_TOL {
                    return Err(Error::Validation(format!(
                        "basis is not orthonormal: ⟨{i}|{j}⟩ = {inner}"
                    )));
                }
            }
        }
        Ok(Self { d_a, vectors })
    }

    /// Constructor for vector sets orthonormal by construction
    /// (parametrized unitaries, eigenvector columns).
    pub(crate) fn from_orthonormal_unchecked(vectors: Vec<Vec<Complex64>>) -> Self {
        let d_a = vectors.len();
        debug_assert!(vectors.iter().all(|v| v.len() == d_a));
        Self { d_a, vectors }
    }

    /// {|0⟩, ..., |d−1⟩}.
    pub fn computational(d_a: usize) -> Self {
        let vectors = (0..d_a)
            .map(|k| {
                (0..d_a)
                    .map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
                    .collect()
            })
            .collect();
        Self { d_a, vectors }
    }

    /// {|+⟩, |−⟩} on a qubit.
    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            d_a: 2,
            vectors: vec![
                vec![Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
                vec![Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
            ],
        }
    }

    /// {(|0⟩+i|1⟩)/√2, (|0⟩−i|1⟩)/√2} on a qubit.
    pub fn circular() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            d_a: 2,
            vectors: vec![
                vec![Complex64::new(h, 0.0), Complex64::new(0.0, h)],
                vec![Complex64::new(h, 0.0), Complex64::new(0.0, -h)],
            ],
        }
    }

    /// Seeded Haar-like random basis: Gram-Schmidt orthonormalization of
    /// a square complex Gaussian matrix's columns.
    pub fn random(d_a: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let g: Vec<Vec<Complex64>> = (0..d_a)
                .map(|_| (0..d_a).map(|_| complex_gaussian(&mut rng)).collect())
                .collect();
            if let Some(vectors) = gram_schmidt(&g) {
                return Self { d_a, vectors };
            }
            // Rank-deficient draw (probability ~0): redraw from the
            // continuing stream.
        }
    }

    pub fn d_a(&self) -> usize {
        self.d_a
    }

    pub fn vectors(&self) -> &[Vec<Complex64>] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &[Complex64] {
        &self.vectors[k]
    }

    /// |A_k⟩⟨A_k| on the apparatus space.
    pub fn projector(&self, k: usize) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vectors[k], &self.vectors[k])
    }
}

fn gram_schmidt(columns: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let mut out: Vec<Vec<Complex64>> = Vec::with_capacity(columns.len());
    for col in columns {
        let mut v = col.clone();
        for u in &out {
            let coeff: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (vi, ui) in v.iter_mut().zip(u) {
                *vi -= coeff * ui;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-12 {
            return None;
        }
        for vi in &mut v {
            *vi /= norm;
        }
        out.push(v);
    }
    Some(out)
}

/// One standard complex Gaussian (re, im ~ N(0,1) independently) via
/// Box-Muller over ChaCha8 uniforms. The uniform map is the top 53 bits
/// of `next_u64`, so the stream is reproducible from the seed alone.
fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let u1 = 1.0 - uniform_f64(rng); // (0, 1]
    let u2 = uniform_f64(rng);
    let radius = (-2.0 * u1.ln()).sqrt();
    let angle = 2.0 * std::f64::consts::PI * u2;
    Complex64::new(radius * angle.cos(), radius * angle.sin())
}

fn uniform_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn ket(amplitudes: &[(f64, f64)]) -> Vec<Complex64> {
    amplitudes
        .iter()
        .map(|&(re, im)| Complex64::new(re, im))
        .collect()
}

/// |ψ⟩⟨ψ| for a (normalized) single-system amplitude vector.
pub fn pure_state(amplitudes: &[Complex64]) -> Result<DensityMatrix> {
    let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
    if (norm_sq - 1.0).abs() > TRACE_TOL {
        return Err(Error::Domain(format!(
            "amplitude vector has squared norm {norm_sq}, expected 1"
        )));
    }
    let m = ComplexMatrix::outer(amplitudes, amplitudes);
    DensityMatrix::new(m, amplitudes.len(), 1)
}

/// |0⟩⟨0| on a qubit.
pub fn ket_zero() -> DensityMatrix {
    pure_state(&ket(&[(1.0, 0.0), (0.0, 0.0)])).unwrap()
}

/// |1⟩⟨1| on a qubit.
pub fn ket_one() -> DensityMatrix {
    pure_state(&ket(&[(0.0, 0.0), (1.0, 0.0)])).unwrap()
}

/// |+⟩⟨+| on a qubit.
pub fn ket_plus() -> DensityMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    pure_state(&ket(&[(h, 0.0), (h, 0.0)])).unwrap()
}

/// The perfectly entangled two-qubit state |ψ⟩⟨ψ|, |ψ⟩ = (|00⟩+|11⟩)/√2.
pub fn make_bell() -> DensityMatrix {
    // Entries written out exactly: (1/√2)² carries a stray ulp.
    let mut m = ComplexMatrix::zeros(4);
    for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
        m.set(i, j, Complex64::new(0.5, 0.0));
    }
    DensityMatrix::from_valid_parts(m, 2, 2)
}

/// The classically correlated mixture (|00⟩⟨00| + |11⟩⟨11|)/2.
pub fn make_classical_mixture() -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4);
    m.set(0, 0, Complex64::new(0.5, 0.0));
    m.set(3, 3, Complex64::new(0.5, 0.0));
    DensityMatrix::from_valid_parts(m, 2, 2)
}

/// z·ρ_bell + (1−z)·I₄/4 for z in [0, 1].
pub fn make_werner(z: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&z) {
        return Err(Error::Domain(format!(
            "werner parameter z = {z} not in [0, 1]"
        )));
    }
    let bell = make_bell();
    let mixed = ComplexMatrix::identity(4).scale(Complex64::new(0.25 * (1.0 - z), 0.0));
    let m = bell.matrix().scale(Complex64::new(z, 0.0)).add(&mixed);
    Ok(DensityMatrix::from_valid_parts(m, 2, 2))
}

/// I/(d_s·d_a) with the given split.
pub fn make_maximally_mixed(d_s: usize, d_a: usize) -> Result<DensityMatrix> {
    let dim = d_s
        .checked_mul(d_a)
        .filter(|&d| d > 0 && d <= DEFAULT_MAX_DIM)
        .ok_or_else(|| {
            Error::Dimension(format!(
                "dimension {d_s}·{d_a} outside (0, {DEFAULT_MAX_DIM}]"
            ))
        })?;
    let m = ComplexMatrix::identity(dim).scale(Complex64::new(1.0 / dim as f64, 0.0));
    Ok(DensityMatrix::from_valid_parts(m, d_s, d_a))
}

/// ½(rho0 ⊗ |0⟩⟨0| + rho1 ⊗ |1⟩⟨1|): a mixture with a classical register
/// on the measured side A (d_a = 2). Zero discord when A is measured in
/// the computational basis; generally nonzero the other way around.
pub fn make_one_way(rho0: &DensityMatrix, rho1: &DensityMatrix) -> Result<DensityMatrix> {
    if rho0.d_a() != 1 || rho1.d_a() != 1 {
        return Err(Error::Dimension(
            "one-way factors must be single-system states (d_a = 1)".into(),
        ));
    }
    if rho0.d_s() != rho1.d_s() {
        return Err(Error::Dimension(format!(
            "one-way factors have mismatched dimensions {} and {}",
            rho0.d_s(),
            rho1.d_s()
        )));
    }
    let comp = MeasurementBasis::computational(2);
    let half = Complex64::new(0.5, 0.0);
    let term0 = rho0.matrix().tensor(&comp.projector(0))?;
    let term1 = rho1.matrix().tensor(&comp.projector(1))?;
    let m = term0.scale(half).add(&term1.scale(half));
    Ok(DensityMatrix::from_valid_parts(m, rho0.d_s(), 2))
}

/// Seeded random mixed state: G·G†/Tr(G·G†) with G a (d_s·d_a)² matrix
/// of independent standard complex Gaussians from ChaCha8(seed).
/// Identical seeds give bit-identical states.
pub fn random_state(d_s: usize, d_a: usize, seed: u64) -> Result<DensityMatrix> {
    let dim = d_s
        .checked_mul(d_a)
        .filter(|&d| d > 0 && d <= DEFAULT_MAX_DIM)
        .ok_or_else(|| {
            Error::Dimension(format!(
                "dimension {d_s}·{d_a} outside (0, {DEFAULT_MAX_DIM}]"
            ))
        })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = ComplexMatrix::from_fn(dim, |_, _| complex_gaussian(&mut rng));
    let gg = g.matmul(&g.adjoint());
    let tr = gg.trace().re;
    let m = gg.scale(Complex64::new(1.0 / tr, 0.0));
    // Symmetrize away the last-bit asymmetry of the float products.
    let m = ComplexMatrix::from_fn(dim, |i, j| (m.get(i, j) + m.get(j, i).conj()) * 0.5);
    Ok(DensityMatrix::from_valid_parts(m, d_s, d_a))
}

/// The unread-measurement channel: Σ_k (1_S ⊗ |A_k⟩⟨A_k|) ρ (1_S ⊗ |A_k⟩⟨A_k|).
///
/// Equivalently Σ_k M_k ⊗ |A_k⟩⟨A_k| with M_k = ⟨A_k|ρ|A_k⟩. Preserves
/// the trace and the S-marginal; idempotent; never decreases entropy.
pub fn decohere(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<DensityMatrix> {
    if basis.d_a() != rho.d_a() {
        return Err(Error::Dimension(format!(
            "basis dimension {} does not match apparatus dimension {}",
            basis.d_a(),
            rho.d_a()
        )));
    }
    let (d_s, d_a) = (rho.d_s(), rho.d_a());
    let mut out = ComplexMatrix::zeros(rho.dim());
    for k in 0..d_a {
        let block = sandwich(rho, basis.vector(k));
        let proj = basis.projector(k);
        let term = block.tensor_with_limit(&proj, rho.dim())?;
        out = out.add(&term);
    }
    // Blocks are Hermitian sandwiches of a Hermitian operator; symmetrize
    // to keep the output exactly within tolerance after summation.
    let sym = ComplexMatrix::from_fn(rho.dim(), |i, j| {
        (out.get(i, j) + out.get(j, i).conj()) * 0.5
    });
    Ok(DensityMatrix::from_valid_parts(sym, d_s, d_a))
}

/// ⟨v|ρ|v⟩ on the apparatus slot: the unnormalized d_s×d_s block
/// Σ_{a,a'} v̄_a ρ[(s,a),(s',a')] v_{a'}.
pub(crate) fn sandwich(rho: &DensityMatrix, v: &[Complex64]) -> ComplexMatrix {
    let (d_s, d_a) = (rho.d_s(), rho.d_a());
    ComplexMatrix::from_fn(d_s, |s, s2| {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 0..d_a {
            for a2 in 0..d_a {
                acc += v[a].conj() * rho.matrix().get(s * d_a + a, s2 * d_a + a2) * v[a2];
            }
        }
        acc
    })
}

#[derive(Serialize, Deserialize)]
struct StateFile {
    d_s: usize,
    d_a: usize,
    /// dim×dim rows of [re, im] pairs.
    matrix: Vec<Vec<[f64; 2]>>,
}

/// Serializes a state to the interchange document (JSON: `d_s`, `d_a`,
/// `matrix` as a row-major dim×dim array of [re, im] pairs).
pub fn state_to_json(rho: &DensityMatrix) -> String {
    let dim = rho.dim();
    let matrix = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    let z = rho.matrix().get(i, j);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    let doc = StateFile {
        d_s: rho.d_s(),
        d_a: rho.d_a(),
        matrix,
    };
    serde_json::to_string_pretty(&doc).expect("state document serializes")
}

/// Parses and fully validates a state document produced by
/// [`state_to_json`].
pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let doc: StateFile = serde_json::from_str(text)
        .map_err(|e| Error::Validation(format!("malformed state document: {e}")))?;
    let dim = doc
        .d_s
        .checked_mul(doc.d_a)
        .ok_or_else(|| Error::Validation("d_s·d_a overflows".into()))?;
    if doc.matrix.len() != dim || doc.matrix.iter().any(|row| row.len() != dim) {
        return Err(Error::Validation(format!(
            "matrix must be {dim}×{dim} to match d_s·d_a"
        )));
    }
    let entries = doc
        .matrix
        .iter()
        .flatten()
        .map(|&[re, im]| Complex::new(re, im))
        .collect();
    let m = ComplexMatrix::new(dim, entries)?;
    DensityMatrix::new(m, doc.d_s, doc.d_a)
}

pub fn save_state(rho: &DensityMatrix, path: &std::path::Path) -> Result<()> {
    std::fs::write(path, state_to_json(rho))
        .map_err(|e| Error::Validation(format!("cannot write state file: {e}")))
}

pub fn load_state(path: &std::path::Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read state file: {e}")))?;
    state_from_json(&text)
}
