//! Work-extraction accounting for local (classical) and global (quantum)
//! demons, and a Monte Carlo engine simulator for the per-step averages.
//!
//! All work values are dimensionless multiples of k_B·T·ln2 — one unit
//! per bit of negentropy. The CLI converts to joules on request.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::basisopt::{min_discord, BasisParams};
use crate::error::{Error, Result};
use crate::infomeasures::{condition_on_measurement, info_report, von_neumann_entropy, PROB_FLOOR};
use crate::qmat::Subsystem;
use crate::states::{DensityMatrix, MeasurementBasis};

/// Work ledger for one state and one measured basis.
///
/// `w_plus` is the extraction gain lg d_S − H(S|A); `w_minus` the
/// Landauer cost of erasing the compressed outcome record; `delta_mu`
/// the memory reclaimed per step by compressing it; `w_classical` the
/// net of the compressing local demon; `w_quantum` the net of a demon
/// measuring in a global eigenbasis; `delta_w` their difference, which
/// equals the discord at this basis.
#[derive(Debug, Clone)]
pub struct WorkReport {
    pub w_plus: f64,
    pub w_minus: f64,
    pub delta_mu: f64,
    pub w_classical: f64,
    pub w_quantum: f64,
    pub delta_w: f64,
    pub basis: MeasurementBasis,
}

impl WorkReport {
    /// Net gain of the demon that spends a whole fresh memory block per
    /// step instead of compressing: w_plus − w_minus.
    pub fn naive_net_work(&self) -> f64 {
        self.w_plus - self.w_minus
    }
}

/// Fills the work ledger and checks that `delta_w` reproduces the
/// information-theoretic discord at the same basis to 1e-9.
pub fn work_report(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<WorkReport> {
    let ens = condition_on_measurement(rho, basis)?;
    let h_cond = ens.conditional_entropy();
    let h_out = ens.outcome_entropy();
    let lg_ds = (rho.d_s() as f64).log2();
    let lg_da = (rho.d_a() as f64).log2();
    let lg_dsa = (rho.dim() as f64).log2();
    let h_sa = von_neumann_entropy(rho);

    let report = WorkReport {
        w_plus: lg_ds - h_cond,
        w_minus: h_out,
        delta_mu: lg_da - h_out,
        w_classical: lg_dsa - (h_out + h_cond),
        w_quantum: lg_dsa - h_sa,
        delta_w: (lg_dsa - h_sa) - (lg_dsa - (h_out + h_cond)),
        basis: basis.clone(),
    };

    let discord = info_report(rho, basis)?.discord;
    if (report.delta_w - discord).abs() > 1e-9 {
        return Err(Error::Numerical(format!(
            "work difference {} disagrees with discord {} beyond 1e-9",
            report.delta_w, discord
        )));
    }
    Ok(report)
}

/// Best classical performance: W^C at the discord-minimizing basis on
/// the chosen side, with the parameters of that basis.
pub fn optimal_classical_work(rho: &DensityMatrix, side: Subsystem) -> Result<(f64, BasisParams)> {
    let m = min_discord(rho, side)?;
    let h_sa = von_neumann_entropy(rho);
    let lg_dsa = (rho.dim() as f64).log2();
    Ok((lg_dsa - (h_sa + m.value), m.argmin))
}

/// The global demon's ceiling and the commuting measurement that
/// attains it.
#[derive(Debug, Clone)]
pub struct QuantumDemonResult {
    /// lg d_SA − H(S,A).
    pub work: f64,
    /// Eigenbasis of ρ over the joint space; measuring in it leaves the
    /// bystander state unchanged.
    pub eigenbasis: MeasurementBasis,
}

/// Work extractable by a demon measuring a global observable that
/// commutes with ρ: lg d_SA − H(S,A).
pub fn quantum_demon_work(rho: &DensityMatrix) -> QuantumDemonResult {
    let eig = crate::qmat::eig_hermitian(rho.matrix())
        .expect("density matrix is Hermitian by construction");
    let work = (rho.dim() as f64).log2() - von_neumann_entropy(rho);
    let vectors = (0..rho.dim()).map(|l| eig.eigenvector(l)).collect();
    QuantumDemonResult {
        work,
        eigenbasis: MeasurementBasis::from_orthonormal_unchecked(vectors),
    }
}

/// Record of one simulated engine run.
#[derive(Debug, Clone)]
pub struct EngineTrace {
    pub steps: usize,
    /// Sampled outcome index per step; every index < d_A.
    pub outcome_record: Vec<usize>,
    /// Total ideal code length Σ_t −lg p(outcome_t) in bits.
    pub ideal_code_length: f64,
    /// Running average of the per-step net work.
    pub net_work_per_step: f64,
    pub seed: u64,
}

/// Per-outcome engine bookkeeping: probability and the net work credited
/// when that outcome occurs.
#[derive(Debug, Clone, Copy)]
pub struct OutcomeCredit {
    pub probability: f64,
    /// (lg d_S − H(ρ_{S|A_k})) + (lg d_A − (−lg p_k)).
    pub work: f64,
}

/// The engine's per-outcome table: extraction credit plus memory
/// reclamation credit. Expectation over outcomes is the compressing
/// demon's net work per step.
pub fn outcome_work_credits(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<Vec<OutcomeCredit>> {
    let ens = condition_on_measurement(rho, basis)?;
    let lg_ds = (rho.d_s() as f64).log2();
    let lg_da = (rho.d_a() as f64).log2();
    Ok(ens
        .outcomes()
        .iter()
        .map(|o| {
            if o.probability <= PROB_FLOOR {
                return OutcomeCredit {
                    probability: 0.0,
                    work: 0.0,
                };
            }
            let extraction = lg_ds - von_neumann_entropy(&o.state);
            let reclamation = lg_da - (-o.probability.log2());
            OutcomeCredit {
                probability: o.probability,
                work: extraction + reclamation,
            }
        })
        .collect())
}

/// Runs the demon engine: each step samples an outcome, credits the
/// extraction work for the conditional state and the memory reclaimed by
/// ideal compression of the record. The running mean converges to the
/// compressing demon's per-step net work.
pub fn simulate_engine(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
    steps: usize,
    seed: u64,
) -> Result<EngineTrace> {
    if steps == 0 {
        return Err(Error::Domain("engine needs at least one step".into()));
    }
    let credits = outcome_work_credits(rho, basis)?;
    // Cumulative distribution over the sampleable outcomes.
    let mut cdf = Vec::with_capacity(credits.len());
    let mut acc = 0.0;
    for c in &credits {
        acc += c.probability;
        cdf.push(acc);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut outcome_record = Vec::with_capacity(steps);
    let mut total_work = 0.0;
    let mut code_length = 0.0;
    for _ in 0..steps {
        let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64 * acc;
        let k = cdf.partition_point(|&c| c <= u).min(credits.len() - 1);
        outcome_record.push(k);
        total_work += credits[k].work;
        code_length += -credits[k].probability.log2();
    }
    Ok(EngineTrace {
        steps,
        outcome_record,
        ideal_code_length: code_length,
        net_work_per_step: total_work / steps as f64,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        decohere, ket_plus, ket_zero, make_bell, make_classical_mixture, make_maximally_mixed,
        make_one_way, make_werner, random_state, MeasurementBasis,
    };

    const TOL: f64 = 1e-9;

    #[test]
    fn bell_work_ledger() {
        let r = work_report(&make_bell(), &MeasurementBasis::computational(2)).unwrap();
        assert!((r.w_quantum - 2.0).abs() < TOL);
        assert!((r.w_classical - 1.0).abs() < TOL);
        assert!((r.delta_w - 1.0).abs() < TOL);
        assert!((r.w_plus - 1.0).abs() < TOL);
        assert!((r.w_minus - 1.0).abs() < TOL);
        assert!(r.delta_mu.abs() < TOL);
        assert!(r.naive_net_work().abs() < TOL);
    }

    #[test]
    fn classical_mixture_work_ledger() {
        let r = work_report(
            &make_classical_mixture(),
            &MeasurementBasis::computational(2),
        )
        .unwrap();
        assert!((r.w_quantum - 1.0).abs() < TOL);
        assert!((r.w_classical - 1.0).abs() < TOL);
        assert!(r.delta_w.abs() < TOL);
    }

    #[test]
    fn maximally_mixed_fuel_has_no_work() {
        let rho = make_maximally_mixed(2, 2).unwrap();
        let r = work_report(&rho, &MeasurementBasis::random(2, 3)).unwrap();
        assert!(r.w_quantum.abs() < TOL);
        assert!(r.w_classical.abs() < TOL);
    }

    #[test]
    fn optimal_classical_work_values() {
        let (w, _) = optimal_classical_work(&make_bell(), Subsystem::A).unwrap();
        assert!((w - 1.0).abs() < TOL);
        let (w, params) = optimal_classical_work(&make_classical_mixture(), Subsystem::A).unwrap();
        assert!((w - 1.0).abs() < TOL);
        match params {
            BasisParams::Qubit { theta, .. } => assert!(theta.abs() < 1e-4),
            _ => panic!("qubit parameters expected"),
        }
        let (w, _) = optimal_classical_work(&make_werner(0.0).unwrap(), Subsystem::A).unwrap();
        assert!(w.abs() < TOL);
    }

    #[test]
    fn quantum_demon_named_values() {
        assert!((quantum_demon_work(&make_bell()).work - 2.0).abs() < TOL);
        assert!((quantum_demon_work(&make_classical_mixture()).work - 1.0).abs() < TOL);
        // Any pure state yields the full lg d_SA.
        let v = MeasurementBasis::random(4, 21).vector(0).to_vec();
        let m = crate::qmat::ComplexMatrix::outer(&v, &v);
        let pure = DensityMatrix::new(m, 2, 2).unwrap();
        assert!((quantum_demon_work(&pure).work - 2.0).abs() < 1e-7);
    }

    #[test]
    fn quantum_demon_eigenbasis_commutes() {
        // Measuring in the returned global eigenbasis leaves the
        // bystander state (and hence its entropy) unchanged.
        let rho = random_state(2, 2, 40).unwrap();
        let demon = quantum_demon_work(&rho);
        let flat = DensityMatrix::new(rho.matrix().clone(), 1, 4).unwrap();
        let pinched = decohere(&flat, &demon.eigenbasis).unwrap();
        assert!((von_neumann_entropy(&pinched) - von_neumann_entropy(&rho)).abs() < 1e-7);
    }

    #[test]
    fn delta_w_matches_discord_on_random_ensemble() {
        for seed in 0..30 {
            let rho = random_state(2, 2, 3000 + seed).unwrap();
            let basis = MeasurementBasis::random(2, 4000 + seed);
            let r = work_report(&rho, &basis).unwrap();
            let delta = info_report_discord(&rho, &basis);
            assert!((r.delta_w - delta).abs() < TOL);
            assert!(r.w_quantum >= r.w_classical - TOL);
            assert!((r.delta_w - (r.w_quantum - r.w_classical)).abs() < TOL);
        }
    }

    fn info_report_discord(rho: &DensityMatrix, basis: &MeasurementBasis) -> f64 {
        crate::infomeasures::info_report(rho, basis)
            .unwrap()
            .discord
    }

    #[test]
    fn classical_demon_matches_quantum_on_decohered_states() {
        for seed in 0..10 {
            let rho = random_state(2, 2, 5000 + seed).unwrap();
            let basis = MeasurementBasis::random(2, 6000 + seed);
            let fixed = decohere(&rho, &basis).unwrap();
            let (w_c, _) = optimal_classical_work(&fixed, Subsystem::A).unwrap();
            let w_q = quantum_demon_work(&fixed).work;
            assert!((w_c - w_q).abs() < 1e-6);
        }
    }

    #[test]
    fn engine_on_classical_mixture_is_exactly_one_bit() {
        let trace = simulate_engine(
            &make_classical_mixture(),
            &MeasurementBasis::computational(2),
            20_000,
            11,
        )
        .unwrap();
        assert_eq!(trace.steps, 20_000);
        assert!((trace.net_work_per_step - 1.0).abs() < 1e-12);
        assert!(trace.outcome_record.iter().all(|&k| k < 2));
        // Uniform outcomes: ideal code length is one bit per step.
        assert!((trace.ideal_code_length - 20_000.0).abs() < 1e-6);
    }

    #[test]
    fn engine_on_pure_product_state_is_deterministic_two_bits() {
        let product = DensityMatrix::new(
            ket_zero().matrix().tensor(ket_zero().matrix()).unwrap(),
            2,
            2,
        )
        .unwrap();
        let trace = simulate_engine(&product, &MeasurementBasis::computational(2), 500, 1).unwrap();
        assert!((trace.net_work_per_step - 2.0).abs() < 1e-12);
        assert!(trace.outcome_record.iter().all(|&k| k == 0));
        assert!(trace.ideal_code_length.abs() < 1e-9);
    }

    #[test]
    fn engine_on_maximally_mixed_averages_to_zero() {
        let rho = make_maximally_mixed(2, 2).unwrap();
        let trace = simulate_engine(&rho, &MeasurementBasis::computational(2), 100_000, 9).unwrap();
        // Per-step work is identically zero for this state.
        assert!(trace.net_work_per_step.abs() < 1e-12);
    }

    #[test]
    fn engine_mean_matches_expected_credit() {
        let rho = make_one_way(&ket_zero(), &ket_plus()).unwrap();
        let basis = MeasurementBasis::computational(2);
        let credits = outcome_work_credits(&rho, &basis).unwrap();
        let expected: f64 = credits.iter().map(|c| c.probability * c.work).sum();
        let trace = simulate_engine(&rho, &basis, 200_000, 123).unwrap();
        // Monte Carlo agreement at 5/sqrt(N).
        assert!((trace.net_work_per_step - expected).abs() < 5.0 / (200_000f64).sqrt());
        // Identical seeds replay identically.
        let again = simulate_engine(&rho, &basis, 200_000, 123).unwrap();
        assert_eq!(trace.outcome_record, again.outcome_record);
    }

    #[test]
    fn engine_rejects_zero_steps() {
        let rho = make_bell();
        assert!(matches!(
            simulate_engine(&rho, &MeasurementBasis::computational(2), 0, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn compressing_demon_never_beats_quantum_bound() {
        for seed in 0..20 {
            let rho = random_state(2, 2, 7000 + seed).unwrap();
            let basis = MeasurementBasis::random(2, 8000 + seed);
            let r = work_report(&rho, &basis).unwrap();
            assert!(r.w_classical <= quantum_demon_work(&rho).work + TOL);
        }
    }

    #[test]
    fn decohered_state_reaches_quantum_bound_at_matching_basis() {
        for seed in 0..10 {
            let rho = random_state(2, 2, 9000 + seed).unwrap();
            let basis = MeasurementBasis::random(2, 9100 + seed);
            let fixed = decohere(&rho, &basis).unwrap();
            let r = work_report(&fixed, &basis).unwrap();
            assert!((r.w_classical - quantum_demon_work(&fixed).work).abs() < TOL);
        }
    }
}
