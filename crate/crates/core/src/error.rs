use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An operation that needs at least one point was handed none.
    #[error("empty domain: {0}")]
    EmptyDomain(&'static str),

    /// An argument lies outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested instance exceeds a configured size cap.
    #[error("instance too large: {what} = {got} exceeds cap {cap}")]
    Size { what: &'static str, got: usize, cap: usize },

    /// Malformed coloring or arrival text.
    #[error("parse error: {0}")]
    Parse(String),

    /// A construction or simulation produced something that breaks its own
    /// invariant. Always a bug.
    #[error("integrity violation: {0}")]
    Integrity(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }
}
