//! Quantum-correlation measures and demon work extraction for
//! finite-dimensional bipartite states.
//!
//! The crate computes, for a density matrix over S⊗A and a projective
//! measurement basis on either side: marginal and joint entropies, both
//! mutual informations, basis-dependent and basis-minimized discord, the
//! polarization between the two ends of a pair, and the work ledgers of
//! local and global demons, including a seeded Monte Carlo engine for
//! the per-step averages.
//!
//! Modules:
//! - [`qmat`] — dense complex matrices, tensor product, partial trace,
//!   Hermitian eigendecomposition.
//! - [`states`] — density matrices, measurement bases, named example
//!   states, seeded random states, the unread-measurement channel, and
//!   the state interchange format.
//! - [`infomeasures`] — entropies, conditioning, mutual informations,
//!   discord.
//! - [`basisopt`] — basis parametrization and minimization of the
//!   basis-dependent measures.
//! - [`demon`] — classical/quantum work accounting and the engine
//!   simulator.
//!
//! # Example
//!
//! ```
//! use qdiscord::basisopt::min_discord;
//! use qdiscord::demon::work_report;
//! use qdiscord::infomeasures::info_report;
//! use qdiscord::states::make_bell;
//! use qdiscord::{MeasurementBasis, Subsystem};
//!
//! let rho = make_bell();
//! let basis = MeasurementBasis::computational(2);
//!
//! let info = info_report(&rho, &basis)?;
//! assert!((info.i_mutual - 2.0).abs() < 1e-9);
//! assert!((info.discord - 1.0).abs() < 1e-9);
//!
//! // A global demon extracts one extra unit of work per pair, and the
//! // gap is exactly the discord at the measured basis.
//! let work = work_report(&rho, &basis)?;
//! assert!((work.w_quantum - work.w_classical - info.discord).abs() < 1e-9);
//!
//! // No measured basis does better on this state: the minimum is flat.
//! let best = min_discord(&rho, Subsystem::A)?;
//! assert!((best.value - 1.0).abs() < 1e-9);
//! # Ok::<(), qdiscord::Error>(())
//! ```

pub mod basisopt;
pub mod demon;
pub mod error;
pub mod infomeasures;
pub mod qmat;
pub mod states;

pub use error::{Error, Result};
pub use qmat::{Complex64, ComplexMatrix, HermitianEigenDecomposition, Subsystem};
pub use states::{DensityMatrix, MeasurementBasis};
