use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch for {what}: expected {expected}, found {found}")]
    DimensionMismatch { what: &'static str, expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("connection is not metric: skew-symmetry defect {defect:.3e}")]
    NonMetricConnection { defect: f64 },
    #[error("frame is not orthonormal at sample point: Gram deviation {deviation:.3e}")]
    NonOrthonormalFrame { deviation: f64 },
    #[error("coordinate degeneracy at {0}")]
    SingularPoint(String),
    #[error("matrix is not Hermitian: defect {defect:.3e}")]
    NotHermitian { defect: f64 },
    #[error("quadrature weights must be positive")]
    NonPositiveWeight,
    #[error("grid size {0} is not allowed (must be even and at least {1})")]
    GridSize(usize, usize),
    #[error("degenerate abscissas in least-squares fit")]
    DegenerateFit,
    #[error("fitted exponent {estimate:.4} is not within {guard} of an integer")]
    NonIntegerExponent { estimate: f64, guard: f64 },
    #[error("singular ODE coefficient at phi = {phi:.6e}")]
    SingularCoefficient { phi: f64 },
}
