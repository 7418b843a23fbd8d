use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate configuration: {0}")]
    Degenerate(String),
    #[error("excluded case: {0}")]
    Excluded(String),
    #[error("outside precomputed scope: {0}")]
    Scope(String),
    #[error("budget exceeded: {what} (needs radius {needed})")]
    Budget { what: String, needed: u32 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cache error: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
