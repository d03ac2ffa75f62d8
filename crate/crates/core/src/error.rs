use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("partition is not noncrossing: {0}")]
    NotNoncrossing(String),
    #[error("invalid grouping: {0}")]
    InvalidGrouping(String),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("degree {0} out of supported range")]
    UnsupportedDegree(usize),
    #[error("Hurwitz orbit exceeded cap of {0} elements")]
    OrbitCapExceeded(usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("root finding did not converge: {0}")]
    RootNonConvergence(String),
    #[error("path passes within {distance:e} of a critical value (threshold {threshold:e})")]
    ClearanceViolation { distance: f64, threshold: f64 },
    #[error("path tracking failed: {0}")]
    TrackingFailure(String),
    #[error("Newton iteration failed: {0}")]
    NewtonFailure(String),
    #[error("shape decreased along lifted path")]
    ShapeDecrease,
    #[error("singular Jacobian without a detectable merge")]
    SingularJacobian,
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::RootNonConvergence(_)
            | Error::ClearanceViolation { .. }
            | Error::TrackingFailure(_)
            | Error::NewtonFailure(_)
            | Error::SingularJacobian => 2,
            Error::Invariant(_) | Error::ShapeDecrease => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
