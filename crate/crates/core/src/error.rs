use thiserror::Error;

/// Errors for state construction, matrix contracts, and relation preconditions.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("not Hermitian (max |m_ij - conj(m_ji)| = {defect:.3e}, tolerance {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("trace is not 1 (got {got})")]
    InvalidTrace { got: f64 },

    #[error("not positive semi-definite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("Gram matrix diagonal entry {index} is not 1 (got {got})")]
    GramDiagonal { index: usize, got: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("state is not normalized (squared norm {got})")]
    NotNormalized { got: f64 },

    #[error("entanglement unavailable for {dim_a}x{dim_b} mixed states; supported: pure states (any dimensions) and 2x2 mixed states")]
    EntanglementUnavailable { dim_a: usize, dim_b: usize },

    #[error("relation precondition violated: {0}")]
    Precondition(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
