use std::path::PathBuf;

/// Errors produced by the sparse kernels, formats and preprocessing steps.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("Matrix Market parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {nrows}x{ncols}")]
    NotSquare { nrows: usize, ncols: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid cluster assignment: {0}")]
    InvalidAssignment(String),

    #[error("invalid CSR structure: {0}")]
    InvalidCsr(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("binary format error: {0}")]
    Format(String),
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
