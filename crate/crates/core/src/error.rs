use thiserror::Error;

/// Errors surfaced by the library.
///
/// Verdicts ("not SDC", kernel deficit, defective member) are *not* errors;
/// they are carried by the result types of the pipeline stages. An `Error`
/// means the input was malformed or the numerics are inconsistent with the
/// configured tolerances.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not symmetric within tolerance (max |M - M^T| = {max_asym:.3e}, allowed {allowed:.3e})")]
    NotSymmetric { max_asym: f64, allowed: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("a pencil needs at least one matrix")]
    EmptyFamily,

    #[error("invalid tolerance configuration: {0}")]
    InvalidTolerance(&'static str),

    #[error("pencil evaluation at the witness is numerically singular (rank {found}, expected {expected})")]
    WitnessInconsistent { found: usize, expected: usize },

    #[error(
        "kernel intersection dimension {dim} exceeds the bound n - r = {bound}; \
         this indicates a rank-tolerance misconfiguration"
    )]
    KernelDimensionExceedsBound { dim: usize, bound: usize },

    #[error("Takagi factorization residual {residual:.3e} exceeds tolerance {allowed:.3e}")]
    TakagiResidual { residual: f64, allowed: f64 },

    #[error(
        "sum_j (lambda0)_j L_j deviates from the identity by {residual:.3e}; \
         the witness and tolerances are inconsistent"
    )]
    IdentityCombination { residual: f64 },

    #[error(
        "off-diagonal block of B(lambda0) has magnitude {magnitude:.3e}, exceeding {allowed:.3e}; \
         upstream joint diagonalization is inconsistent"
    )]
    OffBlockResidual { magnitude: f64, allowed: f64 },

    #[error("certificate verification failed: off-diagonal residual {residual:.3e} exceeds {allowed:.3e}")]
    VerificationFailed { residual: f64, allowed: f64 },

    #[error("invalid synthesis parameters: {0}")]
    InvalidSynthParams(String),

    #[error("malformed input file: {0}")]
    Format(String),

    #[error(
        "structure tensor is not commutative: m[{i}][{j}][{k}] = {lhs} but m[{j}][{i}][{k}] = {rhs}"
    )]
    NonCommutativeTensor {
        i: usize,
        j: usize,
        k: usize,
        lhs: String,
        rhs: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("LAPACK backend failure: {0}")]
    Backend(String),
}

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
