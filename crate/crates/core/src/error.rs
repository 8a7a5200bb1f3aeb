use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the operation's domain (index range,
    /// quantum-number bounds, mismatched qubit counts, negative time).
    #[error("domain error: {0}")]
    Domain(String),

    /// A request that names something that does not exist (unknown
    /// builtin oracle, unknown option value).
    #[error("usage error: {0}")]
    Usage(String),

    /// Malformed external input: truth tables, state files, traces.
    #[error("format error: {0}")]
    Format(String),

    /// A numerical self-check failed. Not expected for valid input.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn format<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Format(msg.into()))
}
