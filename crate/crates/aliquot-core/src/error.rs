//! Error type shared across the crate.

/// Errors returned by range scans and per-integer operations.
///
/// `RangeTooLarge` is the memory-budget signal: the caller is expected to
/// split the request into smaller segments rather than retry. `Undecided` is
/// reserved for searches that exhausted their node budget without proving
/// either answer; census entry points propagate it so callers can distinguish
/// "no" from "gave up".
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A precondition on an argument does not hold.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The requested range exceeds the configured memory or size budget.
    #[error("range too large: {0}")]
    RangeTooLarge(String),

    /// Checked integer arithmetic overflowed; the range is out of supported bounds.
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    /// A bounded search ran out of nodes before proving membership either way.
    #[error("undecided after {nodes} search nodes: {what}")]
    Undecided { what: String, nodes: u64 },

    /// Filesystem failure while reading or writing a segment cache.
    #[error("cache i/o: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn too_large(msg: impl Into<String>) -> Self {
        Error::RangeTooLarge(msg.into())
    }
}
