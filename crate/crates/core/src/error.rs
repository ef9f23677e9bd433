use std::path::PathBuf;

use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("resource limit exceeded for d={d}, n_max={n_max}: {detail}")]
    Resource { d: usize, n_max: usize, detail: String },

    #[error("internal consistency error: {0}")]
    Consistency(String),

    #[error("leading recurrence coefficient p0(n) vanishes at n={n}")]
    SingularLeading { n: i64 },

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("degenerate indicial equation: {0}")]
    DegenerateIndicial(String),

    #[error("malformed input in {path:?}: {detail}")]
    Format { path: Option<PathBuf>, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
