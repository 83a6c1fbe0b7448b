use crate::error::{Error, Result};

/// Sign convention for [`log_gas_energy`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignConvention {
    /// `H = −Σ V(λ_i) − Σ_{i<j} ln|λ_i − λ_j|`.
    #[default]
    Literal,
    /// `H = Σ V(λ_i) − Σ_{i<j} ln|λ_i − λ_j|`, the usual confining form.
    Conventional,
}

/// Log-gas energy of a spectrum under `potential`. With
/// [`SignConvention::Literal`] the potential enters with a minus sign; the
/// pairwise logarithmic repulsion is `−Σ_{i<j} ln|λ_i − λ_j|` in both cases.
pub fn log_gas_energy(
    eigenvalues: &[f64],
    potential: impl Fn(f64) -> f64,
    signs: SignConvention,
) -> Result<f64> {
    if eigenvalues.iter().any(|l| !l.is_finite()) {
        return Err(Error::NonFinite);
    }
    let confining: f64 = eigenvalues.iter().map(|&l| potential(l)).sum();
    let mut repulsion = 0.0;
    for (i, &li) in eigenvalues.iter().enumerate() {
        for (j, &lj) in eigenvalues.iter().enumerate().skip(i + 1) {
            let gap = (li - lj).abs();
            if gap == 0.0 {
                return Err(Error::DegenerateSpectrum { i, j });
            }
            repulsion += gap.ln();
        }
    }
    Ok(match signs {
        SignConvention::Literal => -confining - repulsion,
        SignConvention::Conventional => confining - repulsion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_gap_is_zero() {
        assert_eq!(log_gas_energy(&[0.0, 1.0], |_| 0.0, SignConvention::Literal).unwrap(), 0.0);
    }

    #[test]
    fn gap_two() {
        let h = log_gas_energy(&[0.0, 2.0], |_| 0.0, SignConvention::Literal).unwrap();
        assert!((h + std::f64::consts::LN_2).abs() < 1e-15);
    }

    #[test]
    fn degenerate_pair() {
        assert!(matches!(
            log_gas_energy(&[1.0, 1.0], |_| 0.0, SignConvention::Literal),
            Err(Error::DegenerateSpectrum { i: 0, j: 1 })
        ));
    }

    #[test]
    fn potential_sign_flip() {
        let v = |x: f64| x * x;
        let lit = log_gas_energy(&[0.0, 1.0, 3.0], v, SignConvention::Literal).unwrap();
        let conv = log_gas_energy(&[0.0, 1.0, 3.0], v, SignConvention::Conventional).unwrap();
        // confining sum 10, repulsion ln1 + ln3 + ln2 = ln 6
        assert!((lit - (-10.0 - 6f64.ln())).abs() < 1e-12);
        assert!((conv - (10.0 - 6f64.ln())).abs() < 1e-12);
    }
}
