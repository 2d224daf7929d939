use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid matrix: {0}")]
    InvalidMatrix(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("singular matrix: pivot {pivot:e} in column {column}")]
    SingularMatrix { column: usize, pivot: f64 },
    #[error("iteration did not converge after {iterations} steps")]
    NoConvergence { iterations: usize },
    #[error("matrix exponential refused: {0}")]
    OverflowRisk(String),
    #[error("lambda = {lambda} lies in the spectrum (distance {distance:e})")]
    LambdaInSpectrum { lambda: f64, distance: f64 },
    #[error("mu = {re} + {im}i is not an eigenvalue")]
    MuNotInSpectrum { re: f64, im: f64 },
    #[error("threshold {threshold} splits the eigenvalue cluster at real part {re}")]
    ThresholdOnEigenvalue { threshold: f64, re: f64 },
    #[error("simplex stopped after {pivots} pivots")]
    IterationLimit { pivots: usize },
    #[error("unsupported cone operation: {0}")]
    UnsupportedCone(String),
    #[error("inverse iteration did not converge within {iterations} steps")]
    PowerIterationStalled { iterations: usize },
    #[error("resolvent is singular at lambda = {lambda}")]
    SingularResolvent { lambda: f64 },
    #[error("discretization is not monotone: {0}")]
    MonotonicityViolated(String),
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid coefficients: {0}")]
    InvalidCoefficients(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
