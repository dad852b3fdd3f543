use thiserror::Error;

/// Errors produced by tiling computations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A fixed-width integer operation would have wrapped.
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),

    /// The caller supplied an argument outside the operation's domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A configured size, memory or step budget was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// Two construction paths assigned different weights to one node.
    #[error("inconsistent tiling: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }
}
