//! File formats: the matrix/state JSON schema and the plot-data CSVs.
//!
//! State JSON:
//!
//! ```json
//! { "n_modes": 2, "ordering": "interleaved", "matrix": [[...], ...],
//!   "mean": [...], "kind": "tmsv", "params": { "r_sq": 1.0 } }
//! ```
//!
//! `n_modes` counts all modes, the matrix is row-major, and `ordering` is one
//! of `interleaved`, `block_qp`, `paper_bipartite`. The last needs a
//! `"partition"` field listing party B's modes. `mean`, `kind` and `params`
//! are optional on input.
//!
//! CSV files carry every float with 17 significant digits.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, Write};
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::random_matrix::Histogram;
use crate::states::{GaussianState, Provenance};
use crate::symplectic::{CovarianceMatrix, PartitionSpec, QuadratureOrdering};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub n_modes: usize,
    pub ordering: QuadratureOrdering,
    pub matrix: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, f64>>,
}

/// A covariance matrix read from JSON, with the asymmetry that was averaged away.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedMatrix {
    pub cov: CovarianceMatrix,
    pub max_asymmetry: f64,
}

impl StateFile {
    pub fn from_state(state: &GaussianState) -> Self {
        let m = state.cov().matrix();
        StateFile {
            n_modes: state.n_modes(),
            ordering: state.cov().ordering(),
            matrix: m.row_iter().map(|r| r.iter().copied().collect()).collect(),
            partition: None,
            mean: Some(state.mean().iter().copied().collect()),
            kind: state.provenance().map(|p| p.kind.clone()),
            params: state.provenance().map(|p| p.params.clone()),
        }
    }

    /// Validates the shape and symmetry of the matrix.
    pub fn covariance(&self) -> Result<LoadedMatrix> {
        let dim = 2 * self.n_modes;
        if self.n_modes == 0 {
            return Err(Error::InvalidParameter("n_modes must be ≥ 1".into()));
        }
        if self.matrix.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.matrix.len(),
            });
        }
        if let Some(row) = self.matrix.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.len(),
            });
        }
        let m = DMatrix::from_fn(dim, dim, |i, j| self.matrix[i][j]);
        let max_asymmetry = linalg::max_asymmetry(&m);
        let partition = self.partition.as_ref().map(|p| PartitionSpec::new(p.iter().copied()));
        let cov = CovarianceMatrix::with_partition(m, self.ordering, partition)?;
        Ok(LoadedMatrix { cov, max_asymmetry })
    }

    /// Builds a physical state (stored interleaved).
    pub fn state(&self) -> Result<GaussianState> {
        let loaded = self.covariance()?;
        let mean = match &self.mean {
            Some(mu) => {
                if mu.len() != 2 * self.n_modes {
                    return Err(Error::DimensionMismatch {
                        expected: 2 * self.n_modes,
                        found: mu.len(),
                    });
                }
                // The mean follows the file's ordering; move it to interleaved.
                let slots = crate::symplectic::slot_table(
                    self.n_modes,
                    self.ordering,
                    loaded.cov.partition(),
                )?;
                Some(DVector::from_fn(mu.len(), |i, _| mu[slots[i]]))
            }
            None => None,
        };
        let mut state = GaussianState::new(loaded.cov, mean)?;
        if let Some(kind) = &self.kind {
            state = state.with_provenance(Provenance {
                kind: kind.clone(),
                params: self.params.clone().unwrap_or_default(),
            });
        }
        Ok(state)
    }
}

pub fn state_to_json(state: &GaussianState) -> String {
    let mut s = serde_json::to_string_pretty(&StateFile::from_state(state))
        .expect("state file serializes");
    s.push('\n');
    s
}

pub fn state_from_json(text: &str) -> Result<GaussianState> {
    serde_json::from_str::<StateFile>(text)?.state()
}

pub fn load_state(path: &Path) -> Result<GaussianState> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    state_from_json(&text)
}

pub fn save_state(path: &Path, state: &GaussianState) -> Result<()> {
    fs::write(path, state_to_json(state)).map_err(|e| Error::io(path, e))
}

/// 17 significant digits.
pub fn format_float(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_eigenvalue_csv<W: Write>(mut w: W, values: &[f64]) -> std::io::Result<()> {
    writeln!(w, "eigenvalue")?;
    for &v in values {
        writeln!(w, "{}", format_float(v))?;
    }
    Ok(())
}

pub fn read_eigenvalue_csv<R: BufRead>(r: R) -> Result<Vec<f64>> {
    let mut lines = r.lines();
    match lines.next() {
        Some(Ok(h)) if h.trim() == "eigenvalue" => {}
        _ => return Err(Error::Parse("missing \"eigenvalue\" header".into())),
    }
    lines
        .map(|l| {
            let l = l.map_err(|e| Error::Parse(e.to_string()))?;
            l.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad eigenvalue {l:?}")))
        })
        .collect()
}

pub fn write_histogram_csv<W: Write>(mut w: W, h: &Histogram) -> std::io::Result<()> {
    writeln!(w, "bin_left,bin_right,density")?;
    for (l, r, d) in h.bins() {
        writeln!(w, "{},{},{}", format_float(l), format_float(r), format_float(d))?;
    }
    Ok(())
}

pub fn write_curve_csv<W: Write>(mut w: W, curve: &[(f64, f64)]) -> std::io::Result<()> {
    writeln!(w, "x,density")?;
    for &(x, y) in curve {
        writeln!(w, "{},{}", format_float(x), format_float(y))?;
    }
    Ok(())
}
