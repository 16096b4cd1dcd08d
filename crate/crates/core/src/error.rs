use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An orbit left the phase space (or produced a non-finite value).
    #[error("orbit escaped the space at index {index} (value {value})")]
    Escape { index: usize, value: f64 },

    #[error("invalid argument: {0}")]
    Argument(String),

    /// A construction (interval system, height field, family) violated one of its invariants.
    #[error("construction failed: {0}")]
    Construction(String),

    /// Nested-interval refinement found no covering subinterval for a tree node.
    #[error("refinement failed at node '{node}': {reason}")]
    Refinement { node: String, reason: String },

    /// A shift-space distance could not be resolved within the evaluation depth.
    #[error("shift distance unresolved: sequences agree on the first {depth} positions, threshold {threshold} needs more")]
    Unresolved { depth: u64, threshold: f64 },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
