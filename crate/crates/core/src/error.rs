use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite argument to {0}")]
    NonFinite(&'static str),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// `pivot` is 1-based.
    #[error("matrix is not positive definite (failing pivot {pivot})")]
    NotPositiveDefinite { pivot: usize },

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("empty input to {0}")]
    Empty(&'static str),

    #[error("invalid dataset: {0}")]
    InvalidData(String),

    #[error("unknown covariate column `{0}`")]
    UnknownColumn(String),

    #[error("Newton iterations did not converge in {iterations} steps (last iterate {last:?})")]
    NoConvergence { iterations: usize, last: Vec<f64> },

    #[error("quasi-separation detected: coefficient norm {norm:.3e} exceeds 1e3")]
    Separation { norm: f64 },

    #[error("maximum likelihood fit has not converged")]
    UnconvergedFit,

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("chain carries no Rao-Blackwell cache (no theta* registered)")]
    MissingRbCache,

    #[error("models are not embedded: {0}")]
    NotEmbedded(String),

    #[error("quadrature supports at most 3 dimensions, got {0}")]
    UnsupportedDimension(usize),

    #[error("quadrature self-check failed: coarse grid {coarse} vs fine grid {fine}")]
    QuadratureAccuracy { coarse: f64, fine: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
