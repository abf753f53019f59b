use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the estimators, generators and I/O layer.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,

    #[error("non-finite input")]
    NonFinite,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("insufficient data: need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("degenerate conditioning variable")]
    DegenerateConditioning,

    #[error("degenerate predicted variable")]
    DegeneratePredicted,

    #[error("zero variance")]
    ZeroVariance,

    #[error("degenerate conditional")]
    DegenerateConditional,

    #[error("no prediction error to reduce")]
    NoPredictionError,

    #[error("no coefficients for model {0}")]
    NoCoefficients(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown model '{name}'; valid models: {valid}")]
    UnknownModel { name: String, valid: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// True for errors caused by degenerate data rather than bad input.
    pub fn is_degeneracy(&self) -> bool {
        matches!(
            self,
            Error::DegenerateConditioning
                | Error::DegeneratePredicted
                | Error::ZeroVariance
                | Error::DegenerateConditional
                | Error::NoPredictionError
                | Error::InsufficientData { .. }
        )
    }
}
