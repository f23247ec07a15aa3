//! Matrix file I/O and atomic writes.

use std::fs;
use std::io::Write;
use std::path::Path;

use aluthge_core::{CMatrix, MatrixFile};
use serde::Serialize;

use crate::error::CliError;

/// Writes `bytes` to a temporary file in the target directory, then renames
/// it over `path`, so readers never observe a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let werr = |source| CliError::Write {
        path: path.to_path_buf(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    fs::create_dir_all(dir).map_err(werr)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(werr)?;
    tmp.write_all(bytes).map_err(werr)?;
    tmp.as_file().sync_all().map_err(werr)?;
    tmp.persist(path).map_err(|e| werr(e.error))?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("serializable");
    bytes.push(b'\n');
    write_atomic(path, &bytes)
}

pub fn write_matrix(path: &Path, m: &CMatrix) -> Result<(), CliError> {
    write_json(path, &MatrixFile::from(m))
}

/// Reads a matrix file; malformed content maps to exit 2.
pub fn read_matrix(path: &Path) -> Result<CMatrix, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let malformed = |reason: String| CliError::Malformed {
        path: path.to_path_buf(),
        reason,
    };
    let file: MatrixFile = serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))?;
    CMatrix::try_from(&file).map_err(|e| malformed(e.to_string()))
}

/// Reads a matrix file and requires it to be square (exit 3 otherwise).
pub fn read_square(path: &Path) -> Result<CMatrix, CliError> {
    let m = read_matrix(path)?;
    if !m.is_square() {
        return Err(CliError::NotSquare {
            path: path.to_path_buf(),
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(m)
}
