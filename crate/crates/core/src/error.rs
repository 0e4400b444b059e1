use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the numerical and I/O layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("zero table covers ordinates up to {available}, but {requested} was requested")]
    Coverage { requested: f64, available: f64 },

    #[error("{path}:{line}: {reason}")]
    Parse { path: String, line: usize, reason: String },

    #[error("{path}:{line}: ordinate {value} does not exceed the previous entry {previous}")]
    Monotonicity {
        path: String,
        line: usize,
        value: f64,
        previous: f64,
    },

    #[error("quadrature did not converge: estimated error {achieved:.3e} exceeds requested {requested:.3e}")]
    Quadrature { achieved: f64, requested: f64 },

    #[error("precision exhausted: cancellation of {lost_digits:.1} digits exceeds the {working_digits}-digit budget")]
    Precision { lost_digits: f64, working_digits: u32 },

    #[error("test function violates condition {condition}: {detail}")]
    Condition { condition: &'static str, detail: String },

    #[error("ambiguous shift classification: {0}")]
    Ambiguous(String),

    #[error("invalid character table: {0}")]
    Character(String),

    #[error("checksum mismatch for {path}: expected {expected}, found {found}")]
    Checksum {
        path: PathBuf,
        expected: String,
        found: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
