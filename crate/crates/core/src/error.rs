use thiserror::Error;

/// Errors raised by the simulation and sizing layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("photon count exceeds truncation: ({n_a}, {n_b}) with n_max = {n_max}")]
    TruncationExceeded { n_a: usize, n_b: usize, n_max: usize },

    #[error("state support would exceed truncation: weight {weight:.3e} on total photon number above {max_total}")]
    SupportExceedsTruncation { weight: f64, max_total: usize },

    #[error("truncation mismatch: {left} vs {right}")]
    TruncationMismatch { left: usize, right: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPositive(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("under-sampled scan: {0}")]
    UnderSampled(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
