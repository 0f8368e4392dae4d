use thiserror::Error;

/// Errors raised by the numerical kernel and the dynamics built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension must be at least 1")]
    EmptyDimension,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: ||A - A^H||_F = {defect:e} exceeds {tol:e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{tol:e}")]
    NotPositiveSemidefinite { eigenvalue: f64, tol: f64 },
    #[error("matrix is not positive definite: eigenvalue sum {sum:e} not above {tol:e}")]
    NotPositiveDefinite { sum: f64, tol: f64 },
    #[error("matrix is ill-conditioned: condition number {cond:e} exceeds {threshold:e}")]
    IllConditioned { cond: f64, threshold: f64 },
    #[error("matrix is singular")]
    Singular,
    #[error("{what} did not converge after {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("kick times must be strictly increasing (index {index})")]
    NonIncreasingKicks { index: usize },
    #[error("kick at t = {time} coincides with the interval start")]
    KickAtStart { time: f64 },
    #[error("intermediate time {time} coincides with a kick")]
    KickAtIntermediate { time: f64 },
    #[error("non-finite Hamiltonian sample at t = {time}")]
    NonFiniteSample { time: f64 },
    #[error("kicked Hamiltonian: the iterated integrand is not a function")]
    KickedSpec,
    #[error("Hamiltonian sample at t = {time} is not Hermitian (defect {defect:e})")]
    NonHermitianSample { time: f64, defect: f64 },
    #[error("series order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: usize, max: usize },
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("quadrature resolution {step:e} too coarse for smearing width {width:e}")]
    Unresolved { step: f64, width: f64 },
    #[error("integration window too small: neglected tail {tail:e}")]
    WindowTooSmall { tail: f64 },
    #[error("non-finite right-hand side at x = {x} during iterate {iterate}")]
    NonFiniteRhs { x: f64, iterate: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
