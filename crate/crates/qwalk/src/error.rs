use thiserror::Error;

/// Errors produced by graph construction, spectral routines, and dynamics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("matrix is not symmetric: |H[{i},{j}] - H[{j},{i}]| = {delta:e}")]
    NotSymmetric { i: usize, j: usize, delta: f64 },

    #[error("matrix is not square: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("state is not normalized: | ||psi|| - 1 | = {0:e}")]
    NotNormalized(f64),

    #[error("normalized Laplacian undefined: vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("schedule must contain at least one stage")]
    EmptySchedule,

    #[error("stage {index} has non-positive duration {duration}")]
    InvalidStage { index: usize, duration: f64 },

    #[error("unsupported graph family for this operation: {0}")]
    UnsupportedFamily(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True when the error indicates a violated numerical contract rather
    /// than bad configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NotSymmetric { .. } | Error::NotNormalized(_) | Error::DimensionMismatch { .. }
        )
    }
}
