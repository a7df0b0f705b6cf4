use thiserror::Error;

/// Errors reported by state construction, protocol setup, and bound evaluation.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Squared-norm deviation from 1 exceeded the normalization tolerance.
    #[error("state is not normalized (squared-norm deviation {0:.3e})")]
    NotNormalized(f64),

    #[error("non-finite entry encountered")]
    NonFinite,

    #[error("not a valid density matrix: {0}")]
    NotDensityMatrix(String),

    /// A formula precondition (e.g. a lemma hypothesis) does not hold.
    #[error("infeasible parameters: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
