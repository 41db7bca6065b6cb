use thiserror::Error;

/// Error type shared across the crate.
///
/// Variants map onto the CLI exit-code contract: `Capability` → 2,
/// `Numerical` → 3, everything else → 1.
#[derive(Debug, Error)]
pub enum Error {
    /// Operand shapes or subsystem dimensions do not fit together,
    /// or a product dimension exceeds the configured maximum.
    #[error("dimension error: {0}")]
    Dimension(String),

    /// A scalar argument is outside its admissible range.
    #[error("domain error: {0}")]
    Domain(String),

    /// An input violates a precondition (e.g. a non-Hermitian matrix
    /// passed to the Hermitian eigensolver).
    #[error("contract violation: {0}")]
    Contract(String),

    /// Data loaded from outside (state files) failed an invariant;
    /// the message names the violated invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// The requested operation is not implemented for these inputs.
    #[error("capability error: {0}")]
    Capability(String),

    /// An internal numerical procedure failed to converge or produced
    /// an inconsistent result.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
