use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("fractional order must satisfy 0 < alpha <= 1, got {0}")]
    InvalidOrder(f64),

    #[error("grid needs at least {required} points, got {actual}")]
    GridTooSmall { required: usize, actual: usize },

    #[error("grid point {value} at index {index} is below the positive floor {floor}")]
    NonPositiveGrid { index: usize, value: f64, floor: f64 },

    #[error("grid is not strictly increasing at index {0}")]
    NonIncreasingGrid(usize),

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overdamped regime: lambda = {lambda} exceeds 2*omega^alpha = {limit}")]
    Overdamped { lambda: f64, limit: f64 },

    #[error("no bound states at critical damping (Omega^2 = 0)")]
    CriticalDamping,

    #[error("cannot multiply exponential families exp(a*y^{lhs}) and exp(b*y^{rhs})")]
    IncompatibleExponentials { lhs: f64, rhs: f64 },

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("state n = {0} has no normalization constant")]
    Unnormalized(usize),

    #[error("quantum number {n} exceeds the supported maximum {max}")]
    QuantumNumberTooLarge { n: usize, max: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
