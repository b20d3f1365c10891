use thiserror::Error;

/// Errors raised across the solver workbench.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("singular factor: zero pivot at row {row}")]
    SingularFactor { row: usize },

    #[error("ILU(0) breakdown at row {row}: pivot {pivot:e}")]
    Breakdown { row: usize, pivot: f64 },

    #[error("matrix is not symmetric positive definite ({context})")]
    NotSpd { context: String },

    #[error("operator size {n} exceeds dense assembly limit {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("coarse grid would be empty: cf^dim = {ratio} >= N = {n}")]
    EmptyCoarse { ratio: f64, n: usize },

    #[error("iteration {iteration} produced a non-finite value")]
    Divergence { iteration: usize },

    #[error("estimated memory {bytes} bytes exceeds the {limit} byte guard")]
    MemoryGuard { bytes: u64, limit: u64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
