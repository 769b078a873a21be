use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("file not found: {}", .0.display())]
    NotFound(PathBuf),

    #[error("unsupported or corrupt image {}: {msg}", path.display())]
    Decode { path: PathBuf, msg: String },

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// An argument is outside the admissible range for the operation.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// The input is valid but the quantity is undefined for it
    /// (blank raster, zero variance, collinear polygon, ...).
    #[error("undefined for input: {0}")]
    Domain(String),

    #[error("encoding failed: {0}")]
    Encoding(String),

    #[error("{file}: row {row}: {msg}")]
    Row { file: String, row: usize, msg: String },

    #[error("layer {layer}: {msg}")]
    Layer { layer: usize, msg: String },

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::NotFound(path)
        } else {
            Error::Io { path, source }
        }
    }
}
