//! Serializable matrix files and check reports.

use serde::{Deserialize, Serialize};

use crate::error::MatrixError;
use crate::tolerance::Tolerances;
use crate::{CMatrix, C64};

/// On-disk matrix: explicit `[re, im]` pairs, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl From<&CMatrix> for MatrixFile {
    fn from(m: &CMatrix) -> Self {
        let data = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| {
                        let z = m.get(i, j);
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data,
        }
    }
}

impl TryFrom<&MatrixFile> for CMatrix {
    type Error = MatrixError;

    fn try_from(f: &MatrixFile) -> Result<Self, Self::Error> {
        if f.data.len() != f.rows {
            return Err(MatrixError::InvalidData {
                expected: f.rows * f.cols,
                got: f.data.iter().map(Vec::len).sum(),
            });
        }
        let mut entries = Vec::with_capacity(f.rows * f.cols);
        for row in &f.data {
            if row.len() != f.cols {
                return Err(MatrixError::InvalidData {
                    expected: f.rows * f.cols,
                    got: f.data.iter().map(Vec::len).sum(),
                });
            }
            entries.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        CMatrix::new(f.rows, f.cols, entries)
    }
}

impl TryFrom<MatrixFile> for CMatrix {
    type Error = MatrixError;

    fn try_from(f: MatrixFile) -> Result<Self, Self::Error> {
        CMatrix::try_from(&f)
    }
}

/// Whether a check's identity is expected to hold or to be violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Holds,
    Violated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: MatrixFile,
}

/// Inputs of a single trial, enough to replay it in isolation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub trial: usize,
    pub note: String,
    pub residual: f64,
    pub matrices: Vec<NamedMatrix>,
}

/// Outcome of one randomized check at one dimension.
///
/// `worst_residual` is the largest confirm-side residual divided by its
/// scale `1 + ||inputs||`; `min_refutation` is the smallest raw residual seen
/// on refutation samples that were expected to be far from the identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: String,
    pub seed: u64,
    pub lambda: f64,
    pub dim: usize,
    pub trials: usize,
    pub failures: usize,
    pub vacuous: usize,
    pub redrawn: usize,
    pub worst_residual: f64,
    pub min_refutation: Option<f64>,
    pub expect: Expectation,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<Witness>,
    pub tolerances: Tolerances,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_file_round_trip() {
        let m = CMatrix::new(2, 3, (0..6).map(|k| C64::new(k as f64 * 0.1, -(k as f64))).collect()).unwrap();
        let f = MatrixFile::from(&m);
        let json = serde_json::to_string(&f).unwrap();
        let back: MatrixFile = serde_json::from_str(&json).unwrap();
        assert_eq!(CMatrix::try_from(&back).unwrap(), m);
    }

    #[test]
    fn malformed_files_are_rejected() {
        let ragged = MatrixFile {
            rows: 2,
            cols: 2,
            data: vec![vec![[1.0, 0.0], [0.0, 0.0]], vec![[1.0, 0.0]]],
        };
        assert!(matches!(
            CMatrix::try_from(&ragged),
            Err(MatrixError::InvalidData { .. })
        ));
        let short = MatrixFile {
            rows: 2,
            cols: 1,
            data: vec![vec![[1.0, 0.0]]],
        };
        assert!(CMatrix::try_from(&short).is_err());
        let empty = MatrixFile {
            rows: 0,
            cols: 0,
            data: vec![],
        };
        assert!(matches!(CMatrix::try_from(&empty), Err(MatrixError::EmptyShape { .. })));
        assert!(serde_json::from_str::<MatrixFile>(r#"{"rows":1,"cols":1,"data":[[[1.0]]]}"#).is_err());
    }

    #[test]
    fn shortest_round_trip_floats() {
        let m = CMatrix::from_real(1, 1, &[0.1]).unwrap();
        let json = serde_json::to_string(&MatrixFile::from(&m)).unwrap();
        assert_eq!(json, r#"{"rows":1,"cols":1,"data":[[[0.1,0.0]]]}"#);
    }
}
