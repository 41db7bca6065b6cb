//! Seeded ensemble properties and algebraic invariants across the
//! library: eigensolver contracts, channel monotonicity, discord
//! non-negativity and its equality condition, optimizer ordering, and
//! demon bounds.

use proptest::prelude::*;
use qdiscord::basisopt::{min_discord, min_partial_discord, realize_basis};
use qdiscord::demon::{outcome_work_credits, quantum_demon_work, simulate_engine, work_report};
use qdiscord::infomeasures::{
    condition_on_measurement, info_report, measured_joint_entropy, von_neumann_entropy,
};
use qdiscord::qmat::{eig_hermitian, partial_trace, ComplexMatrix};
use qdiscord::states::{
    decohere, ket_plus, ket_zero, make_bell, make_classical_mixture, make_one_way, make_werner,
    random_state,
};
use qdiscord::{DensityMatrix, MeasurementBasis, Subsystem};

const TOL: f64 = 1e-9;

/// Frozen pre-build Monte Carlo of the seeded generator's ensemble
/// (seeds 0..1000, d_s = d_a = 2).
const MEAN_PURITY_REGRESSION: f64 = 0.470840638173140;

fn random_hermitian(dim_pair: (usize, usize), seed: u64, spread: f64) -> ComplexMatrix {
    // Shifted/scaled random state matrices give Hermitian inputs with
    // both signs in the spectrum.
    let rho = random_state(dim_pair.0, dim_pair.1, seed).unwrap();
    let dim = rho.dim();
    let id = ComplexMatrix::identity(dim).scale(num_complex::Complex::new(-spread / 2.0, 0.0));
    rho.matrix()
        .scale(num_complex::Complex::new(spread * dim as f64, 0.0))
        .add(&id)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eig_reconstructs_and_is_orthonormal(seed in 0u64..5000, d_s in 1usize..4, d_a in 1usize..4) {
        let m = random_hermitian((d_s, d_a), seed, 3.0);
        let eig = eig_hermitian(&m).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&m) < TOL);
        let gram = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(m.dim())) < TOL);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in 0u64..5000, d_s in 1usize..5, d_a in 1usize..5) {
        let rho = random_state(d_s, d_a, seed).unwrap();
        for keep in [Subsystem::S, Subsystem::A] {
            let reduced = partial_trace(rho.matrix(), (d_s, d_a), keep).unwrap();
            prop_assert!((reduced.trace() - rho.matrix().trace()).norm() < 1e-12);
        }
    }

    #[test]
    fn tensor_then_partial_trace_recovers_factor(sa in 0u64..4000, sb in 4000u64..8000) {
        // Tr_A(M ⊗ N) = Tr(N)·M and Tr_S(M ⊗ N) = Tr(M)·N.
        let m = random_hermitian((2, 1), sa, 2.0);
        let n = random_hermitian((3, 1), sb, 2.0);
        let joint = m.tensor(&n).unwrap();
        let tr_n = n.trace();
        let tr_m = m.trace();
        let kept_s = partial_trace(&joint, (2, 3), Subsystem::S).unwrap();
        prop_assert!(kept_s.max_abs_diff(&m.scale(tr_n)) < 1e-10);
        let kept_a = partial_trace(&joint, (2, 3), Subsystem::A).unwrap();
        prop_assert!(kept_a.max_abs_diff(&n.scale(tr_m)) < 1e-10);
    }

    #[test]
    fn decohere_never_decreases_entropy(seed in 0u64..3000, bseed in 3000u64..6000) {
        let rho = random_state(2, 2, seed).unwrap();
        let basis = MeasurementBasis::random(2, bseed);
        let out = decohere(&rho, &basis).unwrap();
        prop_assert!(von_neumann_entropy(&out) >= von_neumann_entropy(&rho) - TOL);
    }

    #[test]
    fn decohered_discord_vanishes_in_its_basis(seed in 0u64..3000, bseed in 6000u64..9000) {
        let rho = random_state(2, 2, seed).unwrap();
        let basis = MeasurementBasis::random(2, bseed);
        let fixed = decohere(&rho, &basis).unwrap();
        prop_assert!(info_report(&fixed, &basis).unwrap().discord <= TOL);
    }
}

#[test]
fn decohere_preserves_marginals_over_ensemble() {
    for seed in 0..40u64 {
        let rho = random_state(2, 2, seed).unwrap();
        let basis = MeasurementBasis::random(2, 10_000 + seed);
        let out = decohere(&rho, &basis).unwrap();
        let diff = out
            .marginal(Subsystem::S)
            .matrix()
            .max_abs_diff(rho.marginal(Subsystem::S).matrix());
        assert!(diff < 1e-10, "seed {seed}: S-marginal moved by {diff}");
        // The A-marginal stays diagonal in the decoherence basis:
        // off-diagonal matrix elements between basis vectors vanish.
        let ma = out.marginal(Subsystem::A);
        for k in 0..2 {
            for l in 0..2 {
                if k == l {
                    continue;
                }
                let mut off = num_complex::Complex::new(0.0, 0.0);
                for i in 0..2 {
                    for j in 0..2 {
                        off +=
                            basis.vector(k)[i].conj() * ma.matrix().get(i, j) * basis.vector(l)[j];
                    }
                }
                assert!(off.norm() < 1e-10);
            }
        }
    }
}

#[test]
fn constructors_all_pass_validation() {
    let mut states = vec![
        make_bell(),
        make_classical_mixture(),
        make_one_way(&ket_zero(), &ket_plus()).unwrap(),
    ];
    for i in 0..=10 {
        states.push(make_werner(i as f64 / 10.0).unwrap());
    }
    for seed in 0..20 {
        states.push(random_state(2, 3, seed).unwrap());
    }
    for rho in states {
        let revalidated = DensityMatrix::new(rho.matrix().clone(), rho.d_s(), rho.d_a());
        assert!(revalidated.is_ok(), "constructor output failed validation");
    }
}

#[test]
fn mean_purity_matches_frozen_ensemble() {
    let mean: f64 = (0..1000u64)
        .map(|seed| random_state(2, 2, seed).unwrap().purity())
        .sum::<f64>()
        / 1000.0;
    // Deterministic generator: exact regression against the recorded run.
    assert!(
        (mean - MEAN_PURITY_REGRESSION).abs() < 1e-12,
        "ensemble drifted: mean purity {mean:.15}"
    );
    // And a loose physical sanity band around the Hilbert-Schmidt value.
    assert!((mean - 8.0 / 17.0).abs() < 0.01);
}

#[test]
fn measured_joint_consistent_with_bystander_entropy() {
    for seed in 0..60u64 {
        let rho = random_state(2, 2, 20_000 + seed).unwrap();
        let basis = MeasurementBasis::random(2, 21_000 + seed);
        let lhs = measured_joint_entropy(&rho, &basis).unwrap();
        let rhs = von_neumann_entropy(&decohere(&rho, &basis).unwrap());
        assert!((lhs - rhs).abs() < TOL);
    }
}

#[test]
fn marginal_entropies_basis_invariant() {
    for seed in 0..10u64 {
        let rho = random_state(2, 2, 30_000 + seed).unwrap();
        let reference = info_report(&rho, &MeasurementBasis::computational(2)).unwrap();
        for bseed in 0..10u64 {
            let r = info_report(&rho, &MeasurementBasis::random(2, 31_000 + bseed)).unwrap();
            assert!((r.h_s - reference.h_s).abs() < 1e-10);
            assert!((r.h_a - reference.h_a).abs() < 1e-10);
            assert!((r.h_sa - reference.h_sa).abs() < 1e-10);
        }
    }
}

#[test]
fn partial_discord_never_exceeds_discord_on_500_states() {
    for seed in 0..500u64 {
        let rho = random_state(2, 2, 40_000 + seed).unwrap();
        let full = min_discord(&rho, Subsystem::A).unwrap();
        let partial = min_partial_discord(&rho, Subsystem::A).unwrap();
        assert!(
            partial.value <= full.value + TOL,
            "seed {seed}: partial {} > full {}",
            partial.value,
            full.value
        );
        assert!(full.value >= -TOL);
        assert!(partial.value >= -TOL);
    }
}

#[test]
fn zero_detection_recovers_decoherence_basis() {
    for seed in 0..12u64 {
        let rho = random_state(2, 2, 50_000 + seed).unwrap();
        let basis = MeasurementBasis::random(2, 51_000 + seed);
        let fixed = decohere(&rho, &basis).unwrap();
        let m = min_discord(&fixed, Subsystem::A).unwrap();
        assert!(m.value <= 1e-6, "seed {seed}: residual discord {}", m.value);
        // The argmin basis matches the decoherence basis up to
        // reordering and per-vector phases.
        let found = realize_basis(&m.argmin, 2).unwrap();
        for k in 0..2 {
            let best_overlap = (0..2)
                .map(|j| {
                    found
                        .vector(k)
                        .iter()
                        .zip(basis.vector(j))
                        .map(|(a, b)| a.conj() * b)
                        .sum::<num_complex::Complex<f64>>()
                        .norm()
                })
                .fold(0.0f64, f64::max);
            assert!(
                best_overlap > 1.0 - 1e-4,
                "seed {seed}: vector {k} overlap {best_overlap}"
            );
        }
    }
}

#[test]
fn werner_sweep_matches_grid_oracle() {
    // 256×256 grid-oracle values (the objective is basis-flat for this
    // family, so the grid and the analytic minimum coincide).
    let frozen = [
        (0.0, 0.0),
        (0.05, 0.003440199850),
        (0.5, 0.262483183764),
        (0.9, 0.783213225435),
        (1.0, 1.0),
    ];
    let mut last = -1.0;
    for &(z, expected) in &frozen {
        let rho = make_werner(z).unwrap();
        let full = min_discord(&rho, Subsystem::A).unwrap();
        assert!(
            (full.value - expected).abs() < 1e-8,
            "z={z}: got {}, oracle {expected}",
            full.value
        );
        assert!(full.value >= last, "not monotone at z={z}");
        last = full.value;
        // The apparatus marginal entropy is basis-independent here, so
        // the partial and full minima agree.
        let partial = min_partial_discord(&rho, Subsystem::A).unwrap();
        assert!((partial.value - full.value).abs() < 1e-8);
    }
}

#[test]
fn second_law_guard_over_ensemble() {
    for seed in 0..200u64 {
        let rho = random_state(2, 2, 60_000 + seed).unwrap();
        let basis = MeasurementBasis::random(2, 61_000 + seed);
        let r = work_report(&rho, &basis).unwrap();
        let bound = quantum_demon_work(&rho).work;
        assert!(
            r.w_classical <= bound + TOL,
            "seed {seed}: classical net {} exceeds quantum bound {bound}",
            r.w_classical
        );
    }
}

#[test]
fn matching_basis_reaches_joint_entropy_form() {
    // For states already of the unread-measurement form, the compressing
    // demon's net work equals lg d_SA − H(S,A) at the matching basis.
    for seed in 0..30u64 {
        let rho = random_state(2, 2, 70_000 + seed).unwrap();
        let basis = MeasurementBasis::random(2, 71_000 + seed);
        let fixed = decohere(&rho, &basis).unwrap();
        let r = work_report(&fixed, &basis).unwrap();
        let joint_form = (fixed.dim() as f64).log2() - von_neumann_entropy(&fixed);
        assert!((r.w_classical - joint_form).abs() < TOL);
    }
}

#[test]
fn engine_tracks_expected_work_on_golden_states() {
    let steps = 100_000usize;
    let bound = 5.0 / (steps as f64).sqrt();
    let golden: Vec<(DensityMatrix, MeasurementBasis)> = vec![
        (make_bell(), MeasurementBasis::computational(2)),
        (make_classical_mixture(), MeasurementBasis::computational(2)),
        (
            make_werner(0.5).unwrap(),
            MeasurementBasis::computational(2),
        ),
        (
            random_state(2, 2, 123).unwrap(),
            MeasurementBasis::computational(2),
        ),
    ];
    for (i, (rho, basis)) in golden.iter().enumerate() {
        let credits = outcome_work_credits(rho, basis).unwrap();
        let expected: f64 = credits.iter().map(|c| c.probability * c.work).sum();
        let trace = simulate_engine(rho, basis, steps, 77).unwrap();
        let dev = (trace.net_work_per_step - expected).abs();
        assert!(dev < bound, "golden {i}: deviation {dev} exceeds {bound}");
    }
}

#[test]
fn conditional_ensemble_probabilities_are_normalized() {
    for seed in 0..50u64 {
        let rho = random_state(2, 2, 80_000 + seed).unwrap();
        let basis = MeasurementBasis::random(2, 81_000 + seed);
        let ens = condition_on_measurement(&rho, &basis).unwrap();
        let total: f64 = ens.probabilities().iter().sum();
        assert!((total - 1.0).abs() < TOL);
        for o in ens.outcomes() {
            assert!(o.probability >= 0.0);
            let check = DensityMatrix::new(o.state.matrix().clone(), o.state.d_s(), 1);
            assert!(check.is_ok(), "conditional state failed validation");
        }
    }
}

#[test]
fn eig_handles_clustered_degenerate_spectra() {
    // Build V·diag(λ)·V† with a known degenerate spectrum and a Haar-like
    // V, then require the solver to reproduce it.
    let spectrum = [
        0.0, 0.0, 0.0, 1e-12, 1e-12, 0.5, 0.5, 0.5, 0.5, 2.0, 2.0, -1.0,
    ];
    let v = MeasurementBasis::random(12, 9001);
    let m = ComplexMatrix::from_fn(12, |i, j| {
        (0..12)
            .map(|l| v.vector(l)[i] * v.vector(l)[j].conj() * spectrum[l])
            .sum()
    });
    let m = ComplexMatrix::from_fn(12, |i, j| (m.get(i, j) + m.get(j, i).conj()) * 0.5);
    let eig = eig_hermitian(&m).unwrap();
    let mut expected = spectrum;
    expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
    for (got, want) in eig.eigenvalues.iter().zip(expected) {
        assert!((got - want).abs() < 1e-9, "eigenvalue {got} vs {want}");
    }
    assert!(eig.reconstruct().max_abs_diff(&m) < TOL);
    let gram = eig.eigenvectors.adjoint().matmul(&eig.eigenvectors);
    assert!(gram.max_abs_diff(&ComplexMatrix::identity(12)) < TOL);
}

#[test]
fn entropy_and_eig_scale_to_moderate_dimensions() {
    let rho = random_state(8, 4, 4242).unwrap();
    let h = von_neumann_entropy(&rho);
    assert!(h > 0.0 && h <= 5.0 + 1e-9);
    let eig = eig_hermitian(rho.matrix()).unwrap();
    assert!(eig.reconstruct().max_abs_diff(rho.matrix()) < TOL);
    assert!((eig.eigenvalues.iter().sum::<f64>() - 1.0).abs() < 1e-10);
}
