use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("invalid model parameters: {0}")]
    InvalidParameters(String),

    /// A perturbative denominator vanishes (`J = J'`, `J' = 0` or `2J + 3J' = 0`).
    #[error("degenerate parameters: {0}")]
    DegenerateParameters(&'static str),

    #[error("negative rate {rate} for channel {channel}")]
    NegativeRate { channel: usize, rate: f64 },

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("integrator failed at theta = {theta}: {reason}")]
    IntegratorFailure { theta: f64, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
