use std::path::PathBuf;

use aluthge_core::MatrixError;
use thiserror::Error;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILURES: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const SHAPE: i32 = 3;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed matrix file {path}: {reason}")]
    Malformed { path: PathBuf, reason: String },
    #[error("matrix in {path} must be square, got {rows}x{cols}")]
    NotSquare { path: PathBuf, rows: usize, cols: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotSquare { .. } => exit::SHAPE,
            _ => exit::USAGE,
        }
    }
}
