use std::path::PathBuf;

/// Errors reported by the library.
///
/// Parameter problems carry the name of the offending parameter so that the
/// command-line front end can point at it directly.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("matrix shapes do not match: {0}")]
    Shape(String),

    #[error("method `{method}` is not available here: {reason}")]
    Method { method: &'static str, reason: String },

    #[error("context mismatch: {0}")]
    ContextMismatch(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("computation too large: {0}")]
    TooLarge(String),

    #[error("cache I/O failed for {path}: {source}")]
    Cache {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed cache file {path}: {source}")]
    CacheFormat {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad input rather than by a bug.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::NotPrime(_)
                | Error::Method { .. }
                | Error::ContextMismatch(_)
                | Error::TooLarge(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
