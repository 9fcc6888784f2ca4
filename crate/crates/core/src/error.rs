use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,
    #[error("region has no pixels")]
    EmptyRegion,
    #[error("zero mass: centroid undefined for an empty region")]
    ZeroMass,
    #[error("feature table is empty")]
    EmptyTable,
    #[error("invalid fold count {k} for {n} rows (need 2 <= k <= n)")]
    InvalidFolds { k: usize, n: usize },
    #[error("insufficient rows: k_neighbors={k_neighbors} exceeds training partition of {available} rows")]
    InsufficientRows {
        k_neighbors: usize,
        available: usize,
    },
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: usize, right: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("invalid label {0:?}: labels must be non-empty and contain no commas or line breaks")]
    InvalidLabel(String),
    #[error("invalid buffer: {0}")]
    InvalidBuffer(String),
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },
    #[error("{path}: byte {offset}: {message}")]
    Decode {
        path: PathBuf,
        offset: u64,
        message: String,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("no frames: {0}")]
    NoFrames(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
