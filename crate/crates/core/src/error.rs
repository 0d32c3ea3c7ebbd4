use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid host: {0}")]
    InvalidHost(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("edge ({0}, {1}) is not an edge of the host graph")]
    NotAnEdge(u32, u32),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("instance too large to materialize: {size} exceeds limit {limit}")]
    TooLarge { size: u64, limit: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
