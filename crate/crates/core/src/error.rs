use thiserror::Error;

/// Errors raised by the matrix kernels and transforms.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyShape { rows: usize, cols: usize },
    #[error("entry buffer has length {got}, expected {expected}")]
    InvalidData { expected: usize, got: usize },
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("vector must be nonzero")]
    ZeroVector,
    #[error("matrix is not Hermitian: ||M - M*||_F = {residual:e}")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below cutoff")]
    NotPositiveSemidefinite { eigenvalue: f64 },
    #[error("exponent must be positive and finite, got {0}")]
    InvalidExponent(f64),
    #[error("lambda must lie in {range}, got {value}")]
    LambdaOutOfRange { value: f64, range: &'static str },
    #[error("{0} did not converge")]
    NoConvergence(&'static str),
    #[error("dimension must be at least {min}, got {dim}")]
    DimensionTooSmall { dim: usize, min: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid tolerances: {0}")]
    InvalidTolerances(String),
}
