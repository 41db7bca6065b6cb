//! Scalar information measures at a fixed measurement basis: marginal and
//! joint entropies, both mutual informations, conditional entropy, the
//! measurement-referred joint entropy, and discord.
//!
//! All logarithms are base 2; every quantity is in bits.

use crate::error::{Error, Result};
use crate::qmat::Subsystem;
use crate::states::{DensityMatrix, MeasurementBasis};

/// Outcomes with probability below this are excluded from entropy
/// averages (0·log 0 continuity) and carry a placeholder state.
pub const PROB_FLOOR: f64 = 1e-12;

/// Entropy of a probability vector, in bits. Entries at or below
/// [`PROB_FLOOR`] contribute zero.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > PROB_FLOOR)
        .map(|&p| -p * p.log2())
        .sum()
}

/// −Tr ρ lg ρ over the clipped spectrum.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy(&rho.eigenvalues_clipped())
}

/// One projective outcome: its probability and the conditional state of
/// the unmeasured side.
#[derive(Debug, Clone)]
pub struct ConditionalOutcome {
    pub probability: f64,
    pub state: DensityMatrix,
}

/// The ensemble an observer attributes to S after measuring A:
/// conditional state ⟨A_k|ρ|A_k⟩/p_A(k) with probability
/// p_A(k) = Tr⟨A_k|ρ|A_k⟩.
#[derive(Debug, Clone)]
pub struct ConditionalEnsemble {
    outcomes: Vec<ConditionalOutcome>,
}

impl ConditionalEnsemble {
    pub fn outcomes(&self) -> &[ConditionalOutcome] {
        &self.outcomes
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.outcomes.iter().map(|o| o.probability).collect()
    }

    /// Entropy of the outcome distribution {p_A(k)}: the apparatus
    /// marginal entropy after an unread measurement.
    pub fn outcome_entropy(&self) -> f64 {
        shannon_entropy(&self.probabilities())
    }

    /// Σ_k p_A(k) · H(ρ_{S|A_k}), skipping sub-floor outcomes.
    pub fn conditional_entropy(&self) -> f64 {
        self.outcomes
            .iter()
            .filter(|o| o.probability > PROB_FLOOR)
            .map(|o| o.probability * von_neumann_entropy(&o.state))
            .sum()
    }
}

/// Conditions ρ on a projective measurement of A.
///
/// Outcomes with probability below [`PROB_FLOOR`] carry the maximally
/// mixed placeholder state and are excluded from entropy averages.
pub fn condition_on_measurement(
    rho: &DensityMatrix,
    basis: &MeasurementBasis,
) -> Result<ConditionalEnsemble> {
    if basis.d_a() != rho.d_a() {
        return Err(Error::Dimension(format!(
            "basis dimension {} does not match apparatus dimension {}",
            basis.d_a(),
            rho.d_a()
        )));
    }
    let d_s = rho.d_s();
    let outcomes = (0..basis.d_a())
        .map(|k| {
            let block = crate::states::sandwich(rho, basis.vector(k));
            let p = block.trace().re;
            let state = if p > PROB_FLOOR {
                let m = block.scale(num_complex::Complex::new(1.0 / p, 0.0));
                DensityMatrix::from_valid_parts(m, d_s, 1)
            } else {
                crate::states::make_maximally_mixed(d_s, 1)
                    .expect("placeholder dimensions are valid")
            };
            ConditionalOutcome {
                probability: p.max(0.0),
                state,
            }
        })
        .collect();
    Ok(ConditionalEnsemble { outcomes })
}

/// H(S|A) at the given basis: Σ_k p_A(k) H(ρ_{S|A_k}).
pub fn conditional_entropy(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<f64> {
    Ok(condition_on_measurement(rho, basis)?.conditional_entropy())
}

/// Measurement-referred joint entropy [H(A) + H(S|A)] at the basis, with
/// the H(A) term taken on the post-measurement outcome distribution.
/// Equals the von Neumann entropy of the decohered state.
pub fn measured_joint_entropy(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<f64> {
    let ens = condition_on_measurement(rho, basis)?;
    Ok(ens.outcome_entropy() + ens.conditional_entropy())
}

/// Every scalar measure for one state at one basis.
///
/// `h_a` is the entropy of the *unmeasured* A-marginal (it enters the
/// symmetric mutual information); the measured-outcome entropy is folded
/// into `h_measured_joint`, so `discord = h_measured_joint - h_sa` and
/// `j_asym = h_s + h_a - h_measured_joint`.
#[derive(Debug, Clone)]
pub struct InfoReport {
    pub h_s: f64,
    pub h_a: f64,
    pub h_sa: f64,
    pub h_s_given_a: f64,
    pub h_measured_joint: f64,
    pub i_mutual: f64,
    pub j_asym: f64,
    pub discord: f64,
    pub basis: MeasurementBasis,
}

/// Computes the full set of measures for ρ at a basis on A.
pub fn info_report(rho: &DensityMatrix, basis: &MeasurementBasis) -> Result<InfoReport> {
    let ens = condition_on_measurement(rho, basis)?;
    let h_s = von_neumann_entropy(&rho.marginal(Subsystem::S));
    let h_a = von_neumann_entropy(&rho.marginal(Subsystem::A));
    let h_sa = von_neumann_entropy(rho);
    let h_s_given_a = ens.conditional_entropy();
    let h_measured_joint = ens.outcome_entropy() + h_s_given_a;
    Ok(InfoReport {
        h_s,
        h_a,
        h_sa,
        h_s_given_a,
        h_measured_joint,
        i_mutual: h_s + h_a - h_sa,
        j_asym: h_s + h_a - h_measured_joint,
        discord: h_measured_joint - h_sa,
        basis: basis.clone(),
    })
}
