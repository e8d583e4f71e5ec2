//! On-disk formats: JSON state files and CSV curves.

use std::fs;
use std::path::Path;

use qdecouple_core::{ComplexMatrix, HermitianOperator, MultipartiteState, Subsystem, C64};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dim {
    pub label: String,
    pub dim: usize,
}

/// A density matrix with labeled tensor factors; entries are `[re, im]` pairs in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub dims: Vec<Dim>,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl StateFile {
    pub fn from_matrix(m: &ComplexMatrix, subsystems: &[Subsystem]) -> Self {
        let matrix = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
            .collect();
        StateFile {
            dims: subsystems
                .iter()
                .map(|s| Dim {
                    label: s.label.clone(),
                    dim: s.dim,
                })
                .collect(),
            matrix,
        }
    }

    pub fn from_state(state: &MultipartiteState) -> Self {
        Self::from_matrix(state.matrix(), state.subsystems())
    }

    pub fn from_operator(op: &HermitianOperator, labels: &[(&str, usize)]) -> Self {
        let subs: Vec<Subsystem> = labels.iter().map(|&(l, d)| Subsystem::new(l, d)).collect();
        Self::from_matrix(op.matrix(), &subs)
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state files always serialize")
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text).map_err(|m| CliError::parse(path, m))
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_json() + "\n").map_err(|e| CliError::io(path, e))
    }

    pub fn subsystems(&self) -> Vec<Subsystem> {
        self.dims.iter().map(|d| Subsystem::new(&d.label, d.dim)).collect()
    }

    /// The matrix, checked to be square with side equal to the product of the dimensions.
    pub fn to_matrix(&self) -> Result<ComplexMatrix, String> {
        if self.dims.is_empty() {
            return Err("`dims` is empty".into());
        }
        let n = self
            .dims
            .iter()
            .try_fold(1usize, |acc, d| acc.checked_mul(d.dim))
            .ok_or("dimension overflow")?;
        if n == 0 {
            return Err("subsystem dimensions must be positive".into());
        }
        if self.matrix.len() != n {
            return Err(format!("matrix has {} rows, dims require {n}", self.matrix.len()));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in self.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(format!("row {i} has {} entries, expected {n}", row.len()));
            }
            data.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        ComplexMatrix::from_vec(n, n, data).map_err(|e| e.to_string())
    }

    pub fn to_state(&self) -> Result<MultipartiteState, String> {
        let m = self.to_matrix()?;
        MultipartiteState::from_matrix(m, self.subsystems()).map_err(|e| e.to_string())
    }
}

/// Reads and validates a state file; any failure is a parse error.
pub fn read_state(path: &Path) -> CliResult<MultipartiteState> {
    StateFile::read(path)?.to_state().map_err(|m| CliError::parse(path, m))
}

/// Formats a float with 17 significant digits; infinities print as `inf` / `-inf`.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// A CSV table with a header row and float-formatted cells.
pub struct CurveFile {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CurveFile {
    pub fn new(header: Vec<&'static str>) -> Self {
        CurveFile {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_csv()).map_err(|e| CliError::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> StateFile {
        StateFile {
            dims: vec![Dim {
                label: "A".into(),
                dim: 2,
            }],
            matrix: vec![vec![[0.7, 0.0], [0.1, -0.2]], vec![[0.1, 0.2], [0.3, 0.0]]],
        }
    }

    #[test]
    fn parses_and_validates() {
        let st = sample().to_state().unwrap();
        assert_eq!(st.dims(), vec![2]);
        assert_eq!(st.matrix()[(0, 1)], C64::new(0.1, -0.2));

        let mut bad = sample();
        bad.matrix[1].pop();
        assert!(bad.to_matrix().unwrap_err().contains("row 1"));

        let mut not_normalized = sample();
        not_normalized.matrix[0][0] = [0.9, 0.0];
        assert!(not_normalized.to_state().is_err());
    }

    #[test]
    fn json_round_trip_is_exact() {
        let mut f = sample();
        f.matrix[0][1] = [0.1 + 1e-17, -(2f64.sqrt()) / 7.0];
        f.matrix[1][0] = [f.matrix[0][1][0], -f.matrix[0][1][1]];
        let again = StateFile::from_json(&f.to_json()).unwrap();
        assert_eq!(again, f);
    }

    #[test]
    fn rejects_unknown_fields() {
        assert!(StateFile::from_json(r#"{"dims":[],"matrix":[],"extra":1}"#).is_err());
    }

    #[test]
    fn curve_formatting() {
        assert_eq!(format_float(0.1), "1.0000000000000001e-1");
        assert_eq!(format_float(f64::INFINITY), "inf");
        let mut c = CurveFile::new(vec!["s", "value"]);
        c.push(vec![format_float(1.0), format_float(-0.5)]);
        assert_eq!(c.to_csv(), "s,value\n1.0000000000000000e0,-5.0000000000000000e-1\n");
    }
}
