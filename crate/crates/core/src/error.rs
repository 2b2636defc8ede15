use thiserror::Error;

/// Errors for frame and POVM computations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {expected} vs {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix shape is not {dim}x{dim}")]
    BadShape { dim: usize },

    #[error("not Hermitian (max |A - A^dag| = {0:.3e})")]
    NotHermitian(f64),

    #[error("not positive semidefinite (min eigenvalue {0:.3e})")]
    NotPsd(f64),

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("singular operator: min eigenvalue {min_eig:.3e} at threshold {threshold:.3e}")]
    Singular { min_eig: f64, threshold: f64 },

    #[error("length mismatch: expected {expected} elements, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("group index ({m},{n}) out of range for dimension {dim}")]
    IndexOutOfRange { m: i64, n: i64, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("completeness condition violated at {context} (magnitude {magnitude:.3e} below {tol:.3e})")]
    CompletenessCondition {
        context: String,
        magnitude: f64,
        tol: f64,
    },

    #[error("malformed subspace decomposition: {0}")]
    MalformedDecomposition(String),

    #[error("fiducial search failed: {0}")]
    FiducialSearch(String),

    #[error("empty frame")]
    EmptyFrame,

    #[error("measurement requires at least one shot")]
    ZeroShots,

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
