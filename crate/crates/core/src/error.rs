//! Crate-wide error type, categorized so callers can map failures to
//! distinct process exit codes.

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed file content or an unsupported layout.
    #[error("format error: {0}")]
    Format(String),

    /// An argument or in-memory value violates an operation's contract.
    #[error("validation error: {0}")]
    Validation(String),

    /// Cross-reference failures: dangling camera ids, name collisions,
    /// missing image files.
    #[error("integrity error: {0}")]
    Integrity(String),

    /// Underlying I/O failure, with context describing what was being done.
    #[error("i/o error: {context}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn format(msg: impl Into<String>) -> Self {
        Error::Format(msg.into())
    }

    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn integrity(msg: impl Into<String>) -> Self {
        Error::Integrity(msg.into())
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit code for this error class. Code 1 is reserved for
    /// command-line usage errors, which never originate in this crate.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Format(_) | Error::Validation(_) => 2,
            Error::Integrity(_) => 3,
            Error::Io { .. } => 4,
        }
    }
}
