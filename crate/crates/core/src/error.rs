use thiserror::Error;

/// Errors raised by the simulation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("records are defined on different grids")]
    GridMismatch,

    #[error("covariance is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPositiveSemidefinite(f64),

    #[error("null calibration needs at least {need} trials, got {got}")]
    InsufficientCalibration { got: usize, need: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
