use std::path::PathBuf;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid joint limits: {0}")]
    InvalidLimits(String),

    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),

    #[error("invalid gains: {0}")]
    InvalidGains(String),

    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),

    /// S_x cannot be inverted, so Condition 1 (S_x S_u = I) has no solution.
    #[error("S_x is not invertible (condition number {condition:e} exceeds cap {cap:e}); Condition 1 cannot be satisfied")]
    NotInvertible { condition: f64, cap: f64 },

    #[error("unknown scenario `{0}` (expected nominal, detectable, scaling, reflection or shear)")]
    UnknownScenario(String),

    #[error("simulation log too short: {0} samples, need at least 2")]
    LogTooShort(usize),

    #[error("time grids differ: {0}")]
    GridMismatch(String),

    #[error("parse error at {origin}:{line}: {message}")]
    Parse {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(origin: &str, line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            origin: origin.to_string(),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub(crate) fn check_len(context: &'static str, expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            actual,
        })
    }
}
