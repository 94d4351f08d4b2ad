use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

/// On-disk matrix: `{"rows": r, "cols": c, "data": [[re, im], ...], "tol": t}`
/// with row-major data. `tol` is optional and only meaningful for weights.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

impl MatrixFile {
    pub fn from_matrix(m: &CMatrix) -> Self {
        Self {
            rows: m.rows(),
            cols: m.cols(),
            data: m.data().iter().map(|z| [z.re, z.im]).collect(),
            tol: None,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = Some(tol);
        self
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        if let Some(t) = self.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::Parse(format!("tol must be positive, got {t}")));
            }
        }
        CMatrix::from_vec(
            self.rows,
            self.cols,
            self.data.iter().map(|&[re, im]| C64::new(re, im)).collect(),
        )
        .map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn parse_matrix(text: &str) -> Result<(CMatrix, Option<f64>)> {
    let file: MatrixFile =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Ok((file.to_matrix()?, file.tol))
}

pub fn read_matrix(path: impl AsRef<Path>) -> Result<(CMatrix, Option<f64>)> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_matrix(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

pub fn matrix_to_json(m: &CMatrix) -> String {
    serde_json::to_string(&MatrixFile::from_matrix(m)).expect("plain data serializes")
}

pub fn write_matrix(path: impl AsRef<Path>, m: &CMatrix) -> Result<()> {
    fs::write(path, matrix_to_json(m) + "\n")?;
    Ok(())
}
