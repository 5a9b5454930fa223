use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("expected a square matrix, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is rank deficient (condition number {condition:.3e})")]
    RankDeficient { condition: f64 },

    #[error("matrix is not symmetric positive-definite")]
    NotPositiveDefinite,

    #[error("singular value decomposition did not converge")]
    NoConvergence,

    #[error("index {index} out of range for {len} blocks")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("singular values do not pair up (relative mismatch {mismatch:.3e}); not a realified complex matrix")]
    NotARealification { mismatch: f64 },

    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("constellation would have {0} points (limit 1000000)")]
    ConstellationTooLarge(u128),

    #[error("could not draw a well-conditioned channel after {0} attempts")]
    RedrawExhausted(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed channel file: {0}")]
    Parse(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the input format.
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::RankDeficient { .. }
                | Error::NotPositiveDefinite
                | Error::NoConvergence
                | Error::NonFinite
                | Error::RedrawExhausted(_)
        )
    }
}
