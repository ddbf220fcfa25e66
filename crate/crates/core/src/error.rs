//! Error type shared by the whole crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied argument is outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix that should be a density matrix is not one (Hermiticity,
    /// trace, or positivity violated beyond tolerance).
    #[error("not a physical state: {0}")]
    InvalidState(String),

    /// Numerical garbage detected mid-pipeline (e.g. a coefficient that must
    /// be real carries a large imaginary part).
    #[error("corrupted state: {0}")]
    CorruptedState(String),

    /// An internal identity that holds for all valid inputs failed; this is a
    /// bug or a catastrophically ill-conditioned input, never a user error.
    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    /// Requested resolution cannot deliver the promised accuracy.
    #[error("accuracy: {0}")]
    Accuracy(String),

    /// The memoryless branch of the decay has no survival-probability zeros.
    #[error("no zeros: 2*gamma0 <= lambda decays monotonically with no zeros")]
    NoZeros,

    /// Text input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Bad run configuration (CLI flags or config file).
    #[error("config: {0}")]
    Config(String),

    /// I/O failure, annotated with the path involved.
    #[error("i/o on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Attach a path to a raw I/O error.
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
