use thiserror::Error;

/// Errors raised by the geometric and transform machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeoError {
    #[error("rank-deficient input: rank {rank}, expected {expected}")]
    Rank { rank: usize, expected: usize },

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("outside supported scope: {0}")]
    Scope(String),

    #[error("quadrature did not converge: {0}")]
    Precision(String),

    #[error("polynomial fit residual {residual:.3e} exceeds threshold {threshold:.3e}")]
    PolynomialFit { residual: f64, threshold: f64 },

    #[error("iteration cap of {cap} reached in {context}")]
    IterationCap { cap: usize, context: &'static str },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, GeoError>;

pub(crate) fn dim_err(msg: impl Into<String>) -> GeoError {
    GeoError::Dimension(msg.into())
}
