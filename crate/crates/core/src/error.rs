use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LabError {
    #[error("grid size {0} must be a power of two and at least 16")]
    GridSize(usize),
    #[error("box length must be positive and finite, got {0}")]
    BoxLength(f64),
    #[error("field has {got} samples, expected {expected}")]
    SampleCount { got: usize, expected: usize },
    #[error("fields live on different grids")]
    GridMismatch,
    #[error("field is not real: max imaginary part {imag:e} exceeds tolerance (max magnitude {magnitude:e})")]
    NotReal { imag: f64, magnitude: f64 },
    #[error("invalid norm: {0}")]
    InvalidNorm(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("nonlinearity overflow: 4*pi*|u|^2 reached {exponent} (limit 700)")]
    Overflow { exponent: f64 },
    #[error("trajectory is empty or too short: {0}")]
    Trajectory(String),
    #[error("under-resolved: {0}")]
    UnderResolved(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, LabError>;
