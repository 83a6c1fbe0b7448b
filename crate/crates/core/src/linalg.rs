//! Small dense helpers shared by the physics modules.

use nalgebra::DMatrix;

/// Eigenvalues of a real symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let mut eig: Vec<f64> = m.clone().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Largest absolute entry (‖M‖_max).
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

/// Largest |M_ij − M_ji|.
pub fn max_asymmetry(m: &DMatrix<f64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    worst
}

/// (M + Mᵀ)/2, with the diagonal copied untouched.
pub fn symmetrize(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    DMatrix::from_fn(n, n, |i, j| if i == j { m[(i, i)] } else { 0.5 * (m[(i, j)] + m[(j, i)]) })
}

/// Minimum eigenvalue of the Hermitian matrix `X + iY` (X symmetric, Y
/// antisymmetric), computed from the real embedding `[[X, −Y], [Y, X]]`.
/// The embedded spectrum is that of `X + iY` with every value doubled, so its
/// minimum is the one we want.
pub fn hermitian_min_eigenvalue(re: &DMatrix<f64>, im: &DMatrix<f64>) -> f64 {
    let n = re.nrows();
    let mut big = DMatrix::zeros(2 * n, 2 * n);
    big.view_mut((0, 0), (n, n)).copy_from(re);
    big.view_mut((n, n), (n, n)).copy_from(re);
    big.view_mut((0, n), (n, n)).copy_from(&(-im));
    big.view_mut((n, 0), (n, n)).copy_from(im);
    symmetric_eigenvalues(&big)[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eigenvalues_sorted() {
        let m = DMatrix::from_row_slice(3, 3, &[3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0]);
        assert_eq!(symmetric_eigenvalues(&m), vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn embedding_of_pauli_y() {
        // σ_y = [[0, −i], [i, 0]] has eigenvalues ±1.
        let re = DMatrix::zeros(2, 2);
        let im = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        assert!((hermitian_min_eigenvalue(&re, &im) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn symmetrize_averages() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 4.0, 5.0]);
        let s = symmetrize(&m);
        assert_eq!(s[(0, 1)], 3.0);
        assert_eq!(s[(1, 0)], 3.0);
        assert_eq!(max_asymmetry(&m), 2.0);
    }
}
