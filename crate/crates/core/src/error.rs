use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum BccdError {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A structural size limit was exceeded (structure enumeration is
    /// exponential; the caps are part of the contract).
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// Malformed input file.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Randomized generation exhausted its rejection budget.
    #[error("generation failed: {0}")]
    Generation(String),

    /// An internal invariant was violated; indicates a bug.
    #[error("invariant violation: {0}")]
    Invariant(String),

    /// A cache file was produced by an incompatible version.
    #[error("version mismatch: expected {expected:#x}, found {found:#x}")]
    VersionMismatch { expected: u32, found: u32 },
}

pub type Result<T> = std::result::Result<T, BccdError>;

impl BccdError {
    /// Convenience constructor for argument errors.
    pub fn invalid_argument(msg: impl Into<String>) -> BccdError {
        BccdError::InvalidArgument(msg.into())
    }
}

pub(crate) fn invalid(msg: impl Into<String>) -> BccdError {
    BccdError::InvalidArgument(msg.into())
}

pub(crate) fn capacity(msg: impl Into<String>) -> BccdError {
    BccdError::Capacity(msg.into())
}
