//! Measurement-basis parametrization and minimization of the
//! basis-dependent measures: least discord, least partial discord, and
//! the polarization between the two ends of a pair.
//!
//! A qubit basis is coordinatized by Bloch angles (θ, φ); higher
//! dimensions use Givens-rotation parameter lists. Qubit searches run a
//! 64×64 coarse grid followed by Nelder-Mead refinement; higher
//! dimensions run seeded random-restart refinement and the result is an
//! upper bound rather than a certified minimum.

use std::f64::consts::{PI, TAU};

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::infomeasures::{condition_on_measurement, von_neumann_entropy};
use crate::qmat::{Complex64, ComplexMatrix, Subsystem};
use crate::states::{DensityMatrix, MeasurementBasis};

/// Largest measured-side dimension the optimizer accepts.
pub const MAX_OPTIMIZED_DIM: usize = 16;

const GRID_THETA: usize = 64;
const GRID_PHI: usize = 64;
const REFINE_MAX_EVALS: usize = 2000;
const IMPROVEMENT_TOL: f64 = 1e-10;
const RANDOM_RESTARTS: usize = 50;
/// Objective values within this of the best compete lexicographically.
const TIE_EPS: f64 = 1e-12;

/// Coordinates for a projective basis on the measured side.
#[derive(Debug, Clone, PartialEq)]
pub enum BasisParams {
    /// d = 2: |A_0⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩ and its
    /// orthogonal complement, θ ∈ [0, π], φ ∈ [0, 2π).
    Qubit { theta: f64, phi: f64 },
    /// d ≥ 2: a product of Givens rotations applied to the
    /// computational basis.
    Givens(Vec<GivensRotation>),
}

/// One plane rotation: identity except rows/columns (i, j) where it acts
/// as [[cos θ, −e^{−iφ} sin θ], [e^{iφ} sin θ, cos θ]].
#[derive(Debug, Clone, PartialEq)]
pub struct GivensRotation {
    pub plane: (usize, usize),
    pub angle: f64,
    pub phase: f64,
}

impl BasisParams {
    /// Flattened coordinates, used for lexicographic tie-breaking.
    pub fn as_vector(&self) -> Vec<f64> {
        match self {
            BasisParams::Qubit { theta, phi } => vec![*theta, *phi],
            BasisParams::Givens(rotations) => {
                rotations.iter().flat_map(|r| [r.angle, r.phase]).collect()
            }
        }
    }
}

/// Builds the measurement basis a parameter point denotes.
///
/// Qubit parameters must lie in their fundamental domain (θ ∈ [0, π],
/// φ ∈ [0, 2π)); the |0⟩ coefficient of each realized vector is real and
/// non-negative. Givens parameters only need finite angles and valid
/// plane indices.
pub fn realize_basis(params: &BasisParams, d_a: usize) -> Result<MeasurementBasis> {
    match params {
        BasisParams::Qubit { theta, phi } => {
            if d_a != 2 {
                return Err(Error::Dimension(format!(
                    "qubit basis parameters cannot realize dimension {d_a}"
                )));
            }
            if !theta.is_finite() || !(0.0..=PI).contains(theta) {
                return Err(Error::Domain(format!("theta = {theta} not in [0, π]")));
            }
            if !phi.is_finite() || !(0.0..TAU).contains(phi) {
                return Err(Error::Domain(format!("phi = {phi} not in [0, 2π)")));
            }
            Ok(realize_qubit(*theta, *phi))
        }
        BasisParams::Givens(rotations) => {
            for r in rotations {
                let (i, j) = r.plane;
                if i == j || i >= d_a || j >= d_a {
                    return Err(Error::Domain(format!(
                        "Givens plane ({i}, {j}) invalid for dimension {d_a}"
                    )));
                }
                if !r.angle.is_finite() || !r.phase.is_finite() {
                    return Err(Error::Domain("Givens parameters must be finite".into()));
                }
            }
            let mut u = ComplexMatrix::identity(d_a);
            for r in rotations {
                u = u.matmul(&givens_matrix(d_a, r));
            }
            let vectors = (0..d_a)
                .map(|k| (0..d_a).map(|i| u.get(i, k)).collect())
                .collect();
            MeasurementBasis::new(vectors)
        }
    }
}

fn realize_qubit(theta: f64, phi: f64) -> MeasurementBasis {
    let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
    let e = Complex64::from_polar(1.0, phi);
    MeasurementBasis::from_orthonormal_unchecked(vec![
        vec![Complex64::new(ct, 0.0), e * st],
        vec![Complex64::new(st, 0.0), -e * ct],
    ])
}

fn givens_matrix(d: usize, r: &GivensRotation) -> ComplexMatrix {
    let (i, j) = r.plane;
    let (c, s) = (r.angle.cos(), r.angle.sin());
    let e = Complex64::from_polar(1.0, r.phase);
    let mut g = ComplexMatrix::identity(d);
    g.set(i, i, Complex64::new(c, 0.0));
    g.set(j, j, Complex64::new(c, 0.0));
    g.set(j, i, e * s);
    g.set(i, j, -e.conj() * s);
    g
}

/// Maps arbitrary (θ, φ) to the fundamental domain θ ∈ [0, π],
/// φ ∈ [0, 2π); the realized projectors are unchanged.
fn canonical_qubit(theta: f64, phi: f64) -> (f64, f64) {
    let mut t = theta.rem_euclid(TAU);
    let mut p = phi;
    if t > PI {
        t = TAU - t;
        p += PI;
    }
    let mut p = p.rem_euclid(TAU);
    // rem_euclid may round up to the modulus itself for tiny negatives.
    if p >= TAU {
        p = 0.0;
    }
    (t.clamp(0.0, PI), p)
}

/// How a minimization searched the basis manifold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchStrategy {
    /// Coarse grid plus simplex refinement (d = 2).
    GridRefine,
    /// Seeded random restarts (d > 2); the value is an upper bound, not
    /// a certified minimum.
    RandomRestart,
}

/// Result of minimizing a basis-dependent objective.
#[derive(Debug, Clone)]
pub struct MinimizationResult {
    /// Minimized value in bits.
    pub value: f64,
    /// Parameters of the best basis found (lexicographically smallest
    /// among ties).
    pub argmin: BasisParams,
    /// Total objective evaluations, grid included.
    pub evaluations: usize,
    /// Whether refinement stopped on the improvement criterion rather
    /// than the evaluation budget.
    pub converged: bool,
    pub strategy: SearchStrategy,
}

impl MinimizationResult {
    /// The measurement basis at the argmin.
    pub fn realize(&self, d_a: usize) -> Result<MeasurementBasis> {
        realize_basis(&self.argmin, d_a)
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

struct Tracker {
    best_params: Vec<f64>,
    best_value: f64,
    evaluations: usize,
}

impl Tracker {
    fn new() -> Self {
        Self {
            best_params: Vec::new(),
            best_value: f64::INFINITY,
            evaluations: 0,
        }
    }

    fn observe(&mut self, params: &[f64], value: f64) {
        self.evaluations += 1;
        if value < self.best_value - TIE_EPS
            || (value <= self.best_value + TIE_EPS && lex_less(params, &self.best_params))
        {
            self.best_params = params.to_vec();
            self.best_value = value;
        }
    }
}

/// Nelder-Mead over R^n. Returns true when a full iteration improved the
/// best vertex by less than `improvement_tol` before the budget ran out.
fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    start: &[f64],
    steps: &[f64],
    max_evals: usize,
    improvement_tol: f64,
) -> bool {
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;

    let dim = start.len();
    let mut simplex: Vec<Vec<f64>> = vec![start.to_vec()];
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += steps[i];
        simplex.push(p);
    }
    let mut evals = 0usize;
    let eval = |f: &mut F, p: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        f(p)
    };
    let mut scores: Vec<f64> = Vec::with_capacity(dim + 1);
    for p in &simplex {
        if evals >= max_evals {
            return false;
        }
        scores.push(eval(&mut f, p, &mut evals));
    }

    loop {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| {
            scores[a]
                .partial_cmp(&scores[b])
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];
        let prev_best = scores[best];

        if evals >= max_evals {
            return false;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|d| order[..dim].iter().map(|&i| simplex[i][d]).sum::<f64>() / dim as f64)
            .collect();

        let reflected: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + ALPHA * (centroid[d] - simplex[worst][d]))
            .collect();
        let score_r = eval(&mut f, &reflected, &mut evals);

        if score_r < scores[best] {
            // Expansion.
            if evals < max_evals {
                let expanded: Vec<f64> = (0..dim)
                    .map(|d| centroid[d] + GAMMA * (reflected[d] - centroid[d]))
                    .collect();
                let score_e = eval(&mut f, &expanded, &mut evals);
                if score_e < score_r {
                    simplex[worst] = expanded;
                    scores[worst] = score_e;
                } else {
                    simplex[worst] = reflected;
                    scores[worst] = score_r;
                }
            } else {
                simplex[worst] = reflected;
                scores[worst] = score_r;
            }
        } else if score_r < scores[second_worst] {
            simplex[worst] = reflected;
            scores[worst] = score_r;
        } else {
            // Contraction.
            if evals >= max_evals {
                return false;
            }
            let contracted: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + RHO * (simplex[worst][d] - centroid[d]))
                .collect();
            let score_c = eval(&mut f, &contracted, &mut evals);
            if score_c < scores[worst] {
                simplex[worst] = contracted;
                scores[worst] = score_c;
            } else {
                // Shrink toward the best vertex.
                let anchor = simplex[best].clone();
                for &i in order[1..].iter() {
                    for (x, b) in simplex[i].iter_mut().zip(&anchor) {
                        *x = b + SIGMA * (*x - *b);
                    }
                    if evals >= max_evals {
                        return false;
                    }
                    scores[i] = eval(&mut f, &simplex[i], &mut evals);
                }
            }
        }

        // Converged once a full iteration can no longer improve the best
        // vertex and the simplex values have collapsed.
        let new_best = scores.iter().cloned().fold(f64::INFINITY, f64::min);
        let new_worst = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if prev_best - new_best < improvement_tol && new_worst - new_best < improvement_tol {
            return true;
        }
    }
}

/// Minimizes `objective(basis)` over projective bases of dimension `d`.
fn minimize_over_bases(
    d: usize,
    objective: &dyn Fn(&MeasurementBasis) -> f64,
) -> Result<(Tracker, bool, SearchStrategy)> {
    if d == 1 {
        let mut tracker = Tracker::new();
        let basis = MeasurementBasis::computational(1);
        tracker.observe(&[], objective(&basis));
        return Ok((tracker, true, SearchStrategy::GridRefine));
    }
    if d == 2 {
        let mut tracker = Tracker::new();
        {
            let mut eval = |raw: &[f64]| -> f64 {
                let (t, p) = canonical_qubit(raw[0], raw[1]);
                let v = objective(&realize_qubit(t, p));
                tracker.observe(&[t, p], v);
                v
            };
            for i in 0..GRID_THETA {
                for j in 0..GRID_PHI {
                    let theta = i as f64 * PI / (GRID_THETA - 1) as f64;
                    let phi = j as f64 * TAU / GRID_PHI as f64;
                    eval(&[theta, phi]);
                }
            }
        }
        let start = tracker.best_params.clone();
        let steps = [PI / (GRID_THETA - 1) as f64, TAU / GRID_PHI as f64];
        let converged = {
            let mut eval = |raw: &[f64]| -> f64 {
                let (t, p) = canonical_qubit(raw[0], raw[1]);
                let v = objective(&realize_qubit(t, p));
                tracker.observe(&[t, p], v);
                v
            };
            nelder_mead(&mut eval, &start, &steps, REFINE_MAX_EVALS, IMPROVEMENT_TOL)
        };
        return Ok((tracker, converged, SearchStrategy::GridRefine));
    }
    if d > MAX_OPTIMIZED_DIM {
        return Err(Error::Capability(format!(
            "basis optimization supports measured-side dimension ≤ {MAX_OPTIMIZED_DIM}, got {d}"
        )));
    }

    // d in 3..=MAX_OPTIMIZED_DIM: seeded random-restart refinement over
    // the full Givens parametrization. Upper bound only.
    let planes: Vec<(usize, usize)> = (0..d)
        .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
        .collect();
    let n_params = 2 * planes.len();
    let mut tracker = Tracker::new();
    let mut any_converged = false;
    for restart in 0..RANDOM_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(restart as u64);
        let start: Vec<f64> = (0..n_params)
            .map(|_| (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * TAU)
            .collect();
        let mut eval = |raw: &[f64]| -> f64 {
            let rotations: Vec<GivensRotation> = planes
                .iter()
                .zip(raw.chunks(2))
                .map(|(&plane, pair)| GivensRotation {
                    plane,
                    angle: pair[0].rem_euclid(TAU),
                    phase: pair[1].rem_euclid(TAU),
                })
                .collect();
            let params = BasisParams::Givens(rotations);
            let basis = realize_basis(&params, d).expect("canonical Givens parameters realize");
            let v = objective(&basis);
            tracker.observe(&params.as_vector(), v);
            v
        };
        let steps = vec![0.3; n_params];
        if nelder_mead(&mut eval, &start, &steps, REFINE_MAX_EVALS, IMPROVEMENT_TOL) {
            any_converged = true;
        }
    }
    Ok((tracker, any_converged, SearchStrategy::RandomRestart))
}

fn params_from_vector(d: usize, v: &[f64]) -> BasisParams {
    if d == 2 {
        BasisParams::Qubit {
            theta: v[0],
            phi: v[1],
        }
    } else {
        let planes: Vec<(usize, usize)> = (0..d)
            .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
            .collect();
        BasisParams::Givens(
            planes
                .iter()
                .zip(v.chunks(2))
                .map(|(&plane, pair)| GivensRotation {
                    plane,
                    angle: pair[0],
                    phase: pair[1],
                })
                .collect(),
        )
    }
}

fn oriented(rho: &DensityMatrix, side: Subsystem) -> DensityMatrix {
    match side {
        Subsystem::A => rho.clone(),
        Subsystem::S => rho.swap_sides(),
    }
}

/// Least discord over projective bases on the chosen side:
/// min [H(A) + H(S|A)] − H(S,A), with the bracket evaluated at each
/// candidate basis. `side` names the measured subsystem.
pub fn min_discord(rho: &DensityMatrix, side: Subsystem) -> Result<MinimizationResult> {
    let target = oriented(rho, side);
    let d = target.d_a();
    let h_sa = von_neumann_entropy(&target);
    let objective = move |basis: &MeasurementBasis| {
        let ens = condition_on_measurement(&target, basis)
            .expect("basis dimension matches by construction");
        ens.outcome_entropy() + ens.conditional_entropy()
    };
    let (tracker, converged, strategy) = minimize_over_bases(d, &objective)?;
    Ok(MinimizationResult {
        value: tracker.best_value - h_sa,
        argmin: params_from_vector(d, &tracker.best_params),
        evaluations: tracker.evaluations,
        converged,
        strategy,
    })
}

/// Least partial discord: H(A) + min H(S|A) − H(S,A), where the H(A)
/// term is the unmeasured marginal entropy, fixed outside the
/// minimization. Never exceeds [`min_discord`].
pub fn min_partial_discord(rho: &DensityMatrix, side: Subsystem) -> Result<MinimizationResult> {
    let target = oriented(rho, side);
    let d = target.d_a();
    let h_sa = von_neumann_entropy(&target);
    let h_a = von_neumann_entropy(&target.marginal(Subsystem::A));
    let objective = move |basis: &MeasurementBasis| {
        condition_on_measurement(&target, basis)
            .expect("basis dimension matches by construction")
            .conditional_entropy()
    };
    let (tracker, converged, strategy) = minimize_over_bases(d, &objective)?;
    Ok(MinimizationResult {
        value: h_a + tracker.best_value - h_sa,
        argmin: params_from_vector(d, &tracker.best_params),
        evaluations: tracker.evaluations,
        converged,
        strategy,
    })
}

/// Directional asymmetry of the least discord between the two ends:
/// min_discord measuring A minus min_discord measuring S. May be
/// negative.
pub fn polarization(rho: &DensityMatrix) -> Result<f64> {
    let towards_s = min_discord(rho, Subsystem::A)?.value;
    let towards_a = min_discord(rho, Subsystem::S)?.value;
    Ok(towards_s - towards_a)
}
