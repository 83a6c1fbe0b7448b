use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg;
use crate::rng::seeded_rng;

/// Sorted eigenvalues of an `m × m` sample covariance built from `n` vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralSample {
    pub eigenvalues: Vec<f64>,
    pub m: usize,
    pub n: usize,
}

impl SpectralSample {
    pub fn ratio(&self) -> f64 {
        self.m as f64 / self.n as f64
    }

    pub fn mean(&self) -> f64 {
        self.eigenvalues.iter().sum::<f64>() / self.eigenvalues.len() as f64
    }
}

/// `Σ = YYᵀ/n` with `Y` an `m × n` matrix of i.i.d. N(0, 1) entries. The
/// columns `X_1 … X_n` are drawn in order, each top to bottom.
pub fn wishart_matrix(m: usize, n: usize, seed: u64) -> Result<DMatrix<f64>> {
    if m == 0 || m > n {
        return Err(Error::InvalidParameter(format!(
            "Wishart sampling needs 1 ≤ m ≤ n, got m = {m}, n = {n}"
        )));
    }
    let mut rng = seeded_rng(seed);
    let entries: Vec<f64> = (0..m * n).map(|_| rng.sample(StandardNormal)).collect();
    let y = DMatrix::from_vec(m, n, entries);
    let sigma = (&y * y.transpose()) / n as f64;
    Ok(linalg::symmetrize(&sigma))
}

/// Eigenvalues of [`wishart_matrix`], ascending.
pub fn sample_wishart(m: usize, n: usize, seed: u64) -> Result<SpectralSample> {
    let sigma = wishart_matrix(m, n, seed)?;
    Ok(SpectralSample {
        eigenvalues: linalg::symmetric_eigenvalues(&sigma),
        m,
        n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(sample_wishart(0, 10, 1).is_err());
        assert!(sample_wishart(11, 10, 1).is_err());
    }

    #[test]
    fn deterministic() {
        let a = sample_wishart(20, 40, 3).unwrap();
        let b = sample_wishart(20, 40, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_wishart(20, 40, 4).unwrap());
    }

    #[test]
    fn single_variable_law_of_large_numbers() {
        let s = sample_wishart(1, 100_000, 17).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 0.05);
    }

    #[test]
    fn trace_mean_near_one() {
        let s = sample_wishart(100, 200, 5).unwrap();
        assert!((s.mean() - 1.0).abs() < 0.05);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        assert!(s.eigenvalues[0] >= -1e-10);
    }
}
