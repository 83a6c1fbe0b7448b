use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("phase-space dimension must be even and positive, got {0}")]
    OddDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("quadrature ordering mismatch: {left} vs {right}")]
    OrderingMismatch { left: &'static str, right: &'static str },

    #[error("ordering {0} requires a bipartition")]
    MissingPartition(&'static str),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("matrix asymmetry {asymmetry:e} exceeds limit {limit:e}")]
    NonSymmetric { asymmetry: f64, limit: f64 },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("covariance matrix violates the uncertainty relation: min eigenvalue {min_eigenvalue:e} < -{tol:e}")]
    Unphysical { min_eigenvalue: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate spectrum: eigenvalues {i} and {j} coincide")]
    DegenerateSpectrum { i: usize, j: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
