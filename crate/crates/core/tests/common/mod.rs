//! Reference implementations used only by tests. None of these share code
//! with the library: the eigensolvers are cyclic Jacobi, the quadrature is
//! tanh-sinh, and Ω and Λ are built from their slot definitions.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations,
/// sorted ascending.
pub fn hermitian_eigenvalues(h: &[Vec<Complex64>]) -> Vec<f64> {
    let n = h.len();
    let mut a: Vec<Vec<Complex64>> = h.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].norm_sqr())
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq.norm() < 1e-300 {
                    continue;
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                // Remove the phase of a_pq, then solve the real 2×2 problem.
                let phase = apq / apq.norm();
                let theta = 0.5 * (2.0 * apq.norm()).atan2(aqq - app);
                let (c, s) = (theta.cos(), theta.sin());
                // Unitary acting on columns p, q.
                let up = [Complex64::new(c, 0.0), -phase.conj() * s];
                let uq = [phase * s, Complex64::new(c, 0.0)];
                // Columns: A ← A U.
                for row in a.iter_mut() {
                    let (x, y) = (row[p], row[q]);
                    row[p] = x * Complex64::new(c, 0.0) + y * (-phase.conj() * s);
                    row[q] = x * (phase * s) + y * Complex64::new(c, 0.0);
                }
                // Rows: A ← U† A.
                for k in 0..n {
                    let (x, y) = (a[p][k], a[q][k]);
                    a[p][k] = up[0].conj() * x + up[1].conj() * y;
                    a[q][k] = uq[0].conj() * x + uq[1].conj() * y;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Real symmetric eigenvalues through the complex solver.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    let h: Vec<Vec<Complex64>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| Complex64::new(m[(i, j)], 0.0)).collect())
        .collect();
    hermitian_eigenvalues(&h)
}

/// Ω in the interleaved layout, entry by entry from `[q_k, p_k] = i`.
pub fn omega_interleaved(n_modes: usize) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n_modes, 2 * n_modes, |i, j| {
        if i / 2 != j / 2 {
            0.0
        } else if i % 2 == 0 && j % 2 == 1 {
            1.0
        } else if i % 2 == 1 && j % 2 == 0 {
            -1.0
        } else {
            0.0
        }
    })
}

/// Λ in the interleaved layout: −1 on `p` of every mode in `party_b`.
pub fn mirror_interleaved(n_modes: usize, party_b: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(2 * n_modes, 2 * n_modes, |i, j| {
        if i != j {
            0.0
        } else if i % 2 == 1 && party_b.contains(&(i / 2)) {
            -1.0
        } else {
            1.0
        }
    })
}

/// Smallest eigenvalue of `ΛVΛ + iΩ/2` for an interleaved `V`, computed with
/// dense products and the complex Jacobi solver.
pub fn pt_min_eigenvalue(v: &DMatrix<f64>, party_b: &[usize]) -> f64 {
    let n = v.nrows() / 2;
    let l = mirror_interleaved(n, party_b);
    let vt = &l * v * &l;
    let om = omega_interleaved(n);
    let h: Vec<Vec<Complex64>> = (0..2 * n)
        .map(|i| {
            (0..2 * n)
                .map(|j| Complex64::new(vt[(i, j)], 0.5 * om[(i, j)]))
                .collect()
        })
        .collect();
    hermitian_eigenvalues(&h)[0]
}

/// Smallest eigenvalue of `V + iΩ/2` for an interleaved `V`.
pub fn uncertainty_min_eigenvalue(v: &DMatrix<f64>) -> f64 {
    pt_min_eigenvalue(v, &[])
}

/// Tanh-sinh quadrature on `[lo, hi]`, refined until successive levels agree.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let pi2 = std::f64::consts::FRAC_PI_2;
    let mut h = 0.5;
    let mut prev = f64::NAN;
    loop {
        let mut sum = pi2 * f(mid);
        let mut k = 1;
        loop {
            let t = k as f64 * h;
            let u = pi2 * t.sinh();
            // Distance of the node from the nearer endpoint, in units of `half`.
            let gap = (-u).exp() / u.cosh();
            let w = pi2 * t.cosh() / (u.cosh() * u.cosh());
            if gap * half == 0.0 || w < 1e-300 {
                break;
            }
            sum += w * (f(lo + half * gap) + f(hi - half * gap));
            k += 1;
        }
        let value = half * h * sum;
        if (value - prev).abs() < 1e-13 * value.abs().max(1.0) || h < 1e-4 {
            return value;
        }
        prev = value;
        h /= 2.0;
    }
}
