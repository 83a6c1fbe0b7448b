//! Gaussian-state covariance matrices: standard families and seeded random
//! states. Every constructor returns a state that satisfies the uncertainty
//! relation at the default tolerance.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expm::expm;
use crate::linalg;
use crate::ppt::Verdict;
use crate::rng::{derive_seed, seeded_rng};
use crate::symplectic::{
    build_omega, uncertainty_check, CovarianceMatrix, PartitionSpec, QuadratureOrdering,
    SymplecticMatrix, UncertaintyReport,
};

/// Classical noise added to each party of a [`separable_product`] state.
pub const DEFAULT_PARTY_NOISE: f64 = 0.1;

/// How a state was built; serialized alongside the covariance matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub kind: String,
    pub params: BTreeMap<String, f64>,
}

impl Provenance {
    fn new(kind: &str, params: &[(&str, f64)]) -> Self {
        Provenance {
            kind: kind.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }
}

/// A physical Gaussian state: covariance (interleaved layout) plus mean.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    cov: CovarianceMatrix,
    mean: DVector<f64>,
    provenance: Option<Provenance>,
}

impl GaussianState {
    /// Accepts `cov` only if it passes the uncertainty relation at its
    /// default tolerance. The matrix is converted to the interleaved layout.
    pub fn new(cov: CovarianceMatrix, mean: Option<DVector<f64>>) -> Result<Self> {
        let cov = cov.to_ordering(QuadratureOrdering::Interleaved, None)?;
        let mean = mean.unwrap_or_else(|| DVector::zeros(cov.dim()));
        if mean.len() != cov.dim() {
            return Err(Error::DimensionMismatch {
                expected: cov.dim(),
                found: mean.len(),
            });
        }
        let report = uncertainty_check(&cov, None);
        if !report.passes {
            return Err(Error::Unphysical {
                min_eigenvalue: report.min_eigenvalue,
                tol: report.tol,
            });
        }
        Ok(GaussianState {
            cov,
            mean,
            provenance: None,
        })
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = Some(provenance);
        self
    }

    fn built(matrix: DMatrix<f64>, provenance: Provenance) -> Result<Self> {
        let cov = CovarianceMatrix::from_symmetric(matrix, QuadratureOrdering::Interleaved);
        Ok(GaussianState::new(cov, None)?.with_provenance(provenance))
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }
    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }
    pub fn n_modes(&self) -> usize {
        self.cov.n_modes()
    }
    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }
}

/// Re-runs the uncertainty check on a state.
pub fn validate(state: &GaussianState) -> UncertaintyReport {
    uncertainty_check(state.cov(), None)
}

fn require_modes(n_modes: usize) -> Result<()> {
    if n_modes == 0 {
        return Err(Error::InvalidParameter("need at least one mode".into()));
    }
    Ok(())
}

/// `V = I/2`.
pub fn vacuum(n_modes: usize) -> Result<GaussianState> {
    require_modes(n_modes)?;
    let dim = 2 * n_modes;
    GaussianState::built(
        DMatrix::identity(dim, dim) * 0.5,
        Provenance::new("vacuum", &[("n_modes", n_modes as f64)]),
    )
}

/// Product of thermal modes: block `k` is `(n̄_k + 1/2)·I₂`.
pub fn thermal(occupations: &[f64]) -> Result<GaussianState> {
    require_modes(occupations.len())?;
    if let Some(bad) = occupations.iter().find(|n| !(**n >= 0.0) || !n.is_finite()) {
        return Err(Error::InvalidParameter(format!("thermal occupation {bad} must be ≥ 0")));
    }
    let diag: Vec<f64> = occupations.iter().flat_map(|n| [n + 0.5, n + 0.5]).collect();
    let params: Vec<(String, f64)> = occupations
        .iter()
        .enumerate()
        .map(|(k, n)| (format!("nbar_{k}"), *n))
        .collect();
    let provenance = Provenance {
        kind: "thermal".into(),
        params: params.into_iter().collect(),
    };
    GaussianState::built(DMatrix::from_diagonal(&DVector::from_vec(diag)), provenance)
}

fn check_squeezing(r_sq: f64) -> Result<()> {
    if !(r_sq >= 0.0) || !r_sq.is_finite() {
        return Err(Error::InvalidParameter(format!("squeezing {r_sq} must be ≥ 0")));
    }
    Ok(())
}

/// Writes a two-mode squeezed block on modes `a`, `b` into an interleaved
/// matrix: `(1/2)[[cosh 2r·I, sinh 2r·Z], [sinh 2r·Z, cosh 2r·I]]`.
fn put_tmsv(m: &mut DMatrix<f64>, a: usize, b: usize, r_sq: f64) {
    let c = 0.5 * (2.0 * r_sq).cosh();
    let s = 0.5 * (2.0 * r_sq).sinh();
    let (qa, pa, qb, pb) = (2 * a, 2 * a + 1, 2 * b, 2 * b + 1);
    m[(qa, qa)] = c;
    m[(pa, pa)] = c;
    m[(qb, qb)] = c;
    m[(pb, pb)] = c;
    m[(qa, qb)] = s;
    m[(qb, qa)] = s;
    m[(pa, pb)] = -s;
    m[(pb, pa)] = -s;
}

/// Two-mode squeezed vacuum on modes 0|1.
pub fn two_mode_squeezed(r_sq: f64) -> Result<GaussianState> {
    check_squeezing(r_sq)?;
    let mut m = DMatrix::zeros(4, 4);
    put_tmsv(&mut m, 0, 1, r_sq);
    GaussianState::built(m, Provenance::new("tmsv", &[("r_sq", r_sq)]))
}

/// `n` independent two-mode squeezed pairs, pair `i` on modes `i` and `n+i`
/// with squeezing `r_sq[i]`.
pub fn squeezed_pairs(r_sq: &[f64]) -> Result<GaussianState> {
    require_modes(r_sq.len())?;
    let n = r_sq.len();
    let mut m = DMatrix::zeros(4 * n, 4 * n);
    for (i, &r) in r_sq.iter().enumerate() {
        check_squeezing(r)?;
        put_tmsv(&mut m, i, n + i, r);
    }
    let params: Vec<(String, f64)> = r_sq
        .iter()
        .enumerate()
        .map(|(i, r)| (format!("r_sq_{i}"), *r))
        .collect();
    GaussianState::built(
        m,
        Provenance {
            kind: "tmsv_pairs".into(),
            params: params.into_iter().collect(),
        },
    )
}

/// `exp(Ω·A)` for symmetric `A`; symplectic for every such `A`.
pub fn symplectic_from_generator(generator: &DMatrix<f64>) -> Result<SymplecticMatrix> {
    if !generator.is_square() || !generator.nrows().is_multiple_of(2) || generator.nrows() == 0 {
        return Err(Error::OddDimension(generator.nrows()));
    }
    let omega = build_omega(generator.nrows() / 2, QuadratureOrdering::Interleaved);
    let s = expm(&(omega.matrix() * generator));
    SymplecticMatrix::new(s, QuadratureOrdering::Interleaved)
}

/// Random symmetric generator with N(0,1) entries scaled by `1/√(2N)`,
/// drawn row by row over the upper triangle.
pub fn random_generator(n_modes: usize, seed: u64) -> DMatrix<f64> {
    let dim = 2 * n_modes;
    let scale = 1.0 / (dim as f64).sqrt();
    let mut rng = seeded_rng(seed);
    let mut a = DMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let x: f64 = rng.sample(StandardNormal);
            a[(i, j)] = x * scale;
            a[(j, i)] = x * scale;
        }
    }
    a
}

/// Seeded random symplectic matrix `exp(Ω·A)`.
pub fn random_symplectic(n_modes: usize, seed: u64) -> Result<SymplecticMatrix> {
    require_modes(n_modes)?;
    symplectic_from_generator(&random_generator(n_modes, seed))
}

fn pure_matrix(n_modes: usize, seed: u64) -> Result<DMatrix<f64>> {
    let s = random_symplectic(n_modes, seed)?;
    let m = s.matrix();
    Ok(linalg::symmetrize(&(m * m.transpose() * 0.5)))
}

/// Random pure state `V = S·Sᵀ/2`.
pub fn random_pure(n_modes: usize, seed: u64) -> Result<GaussianState> {
    let m = pure_matrix(n_modes, seed)?;
    GaussianState::built(
        m,
        Provenance::new("random_pure", &[("n_modes", n_modes as f64), ("seed", seed as f64)]),
    )
}

/// Random pure state plus classical noise: `V = S·Sᵀ/2 + ν·I`.
pub fn random_mixed(n_modes: usize, seed: u64, noise: f64) -> Result<GaussianState> {
    if !(noise >= 0.0) || !noise.is_finite() {
        return Err(Error::InvalidParameter(format!("noise {noise} must be ≥ 0")));
    }
    let mut m = pure_matrix(n_modes, seed)?;
    for i in 0..m.nrows() {
        m[(i, i)] += noise;
    }
    GaussianState::built(
        m,
        Provenance::new(
            "random_mixed",
            &[("n_modes", n_modes as f64), ("seed", seed as f64), ("noise", noise)],
        ),
    )
}

/// [`separable_product_with_noise`] with [`DEFAULT_PARTY_NOISE`].
pub fn separable_product(n_per_party: usize, seed: u64) -> Result<GaussianState> {
    separable_product_with_noise(n_per_party, seed, DEFAULT_PARTY_NOISE)
}

/// Direct sum `V_A ⊕ V_B` of two independent [`random_mixed`] states on
/// `n_per_party` modes each. Party A holds modes `0..n`, party B holds
/// `n..2n` (see [`PartitionSpec::second_half`]). The party seeds are
/// `derive_seed(seed, 0)` and `derive_seed(seed, 1)`.
pub fn separable_product_with_noise(
    n_per_party: usize,
    seed: u64,
    noise: f64,
) -> Result<GaussianState> {
    require_modes(n_per_party)?;
    let a = random_mixed(n_per_party, derive_seed(seed, 0), noise)?;
    let b = random_mixed(n_per_party, derive_seed(seed, 1), noise)?;
    let d = 2 * n_per_party;
    let mut m = DMatrix::zeros(2 * d, 2 * d);
    m.view_mut((0, 0), (d, d)).copy_from(a.cov().matrix());
    m.view_mut((d, d), (d, d)).copy_from(b.cov().matrix());
    GaussianState::built(
        m,
        Provenance::new(
            "separable_product",
            &[
                ("n_per_party", n_per_party as f64),
                ("seed", seed as f64),
                ("noise", noise),
            ],
        ),
    )
}

/// Families available to [`EnsembleSpec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    SeparableProduct,
    RandomPure,
    RandomMixed,
    TwoModeSqueezed,
}

impl EnsembleKind {
    /// Separability known from the construction, if any.
    pub fn label(self) -> Option<Verdict> {
        match self {
            EnsembleKind::SeparableProduct => Some(Verdict::Separable),
            EnsembleKind::TwoModeSqueezed => Some(Verdict::Entangled),
            EnsembleKind::RandomPure | EnsembleKind::RandomMixed => None,
        }
    }
}

/// Kind-specific parameters. Squeezings are drawn uniformly from
/// `[r_sq_min, r_sq_max]`, independently per pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub r_sq_min: f64,
    pub r_sq_max: f64,
    pub noise: f64,
}

impl Default for EnsembleParams {
    fn default() -> Self {
        EnsembleParams {
            r_sq_min: 0.5,
            r_sq_max: 2.0,
            noise: DEFAULT_PARTY_NOISE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub n_states: usize,
    pub n_modes_per_party: usize,
    pub kind: EnsembleKind,
    pub seed: u64,
    pub params: EnsembleParams,
}

/// One generated ensemble member.
#[derive(Debug, Clone)]
pub struct Member {
    pub index: usize,
    pub seed: u64,
    pub label: Option<Verdict>,
    pub state: GaussianState,
}

impl EnsembleSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_states == 0 {
            return Err(Error::InvalidParameter("ensemble needs n_states ≥ 1".into()));
        }
        require_modes(self.n_modes_per_party)?;
        let p = &self.params;
        if !(p.r_sq_min > 0.0 && p.r_sq_min <= p.r_sq_max && p.r_sq_max.is_finite())
            && self.kind == EnsembleKind::TwoModeSqueezed
        {
            return Err(Error::InvalidParameter(format!(
                "squeezing range [{}, {}] must satisfy 0 < min ≤ max",
                p.r_sq_min, p.r_sq_max
            )));
        }
        if !(p.noise >= 0.0) {
            return Err(Error::InvalidParameter(format!("noise {} must be ≥ 0", p.noise)));
        }
        Ok(())
    }

    pub fn total_modes(&self) -> usize {
        2 * self.n_modes_per_party
    }

    /// The A|B split used for every member: B = modes `n..2n`.
    pub fn partition(&self) -> PartitionSpec {
        PartitionSpec::second_half(self.total_modes())
    }

    /// Member `index`, seeded with `derive_seed(self.seed, index)`.
    pub fn member(&self, index: usize) -> Result<Member> {
        let seed = derive_seed(self.seed, index as u64);
        let n = self.n_modes_per_party;
        let p = &self.params;
        let state = match self.kind {
            EnsembleKind::SeparableProduct => separable_product_with_noise(n, seed, p.noise)?,
            EnsembleKind::RandomPure => random_pure(2 * n, seed)?,
            EnsembleKind::RandomMixed => random_mixed(2 * n, seed, p.noise)?,
            EnsembleKind::TwoModeSqueezed => {
                let mut rng = seeded_rng(seed);
                let r: Vec<f64> = (0..n)
                    .map(|_| {
                        if p.r_sq_min == p.r_sq_max {
                            p.r_sq_min
                        } else {
                            rng.random_range(p.r_sq_min..=p.r_sq_max)
                        }
                    })
                    .collect();
                if n == 1 {
                    two_mode_squeezed(r[0])?
                } else {
                    squeezed_pairs(&r)?
                }
            }
        };
        Ok(Member {
            index,
            seed,
            label: self.kind.label(),
            state,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::is_symplectic;

    #[test]
    fn vacuum_shapes() {
        let v = vacuum(1).unwrap();
        assert_eq!(v.cov().matrix(), &(DMatrix::identity(2, 2) * 0.5));
        assert_eq!(vacuum(3).unwrap().cov().dim(), 6);
        assert!(validate(&vacuum(5).unwrap()).min_eigenvalue.abs() < 1e-12);
        assert!(vacuum(0).is_err());
    }

    #[test]
    fn thermal_cases() {
        assert_eq!(thermal(&[0.0, 0.0]).unwrap().cov(), vacuum(2).unwrap().cov());
        let t = thermal(&[1.0]).unwrap();
        assert_eq!(t.cov().matrix(), &(DMatrix::identity(2, 2) * 1.5));
        assert!(thermal(&[-0.1]).is_err());
        assert!(thermal(&[f64::NAN]).is_err());
    }

    #[test]
    fn tmsv_cases() {
        assert_eq!(two_mode_squeezed(0.0).unwrap().cov(), vacuum(2).unwrap().cov());
        assert!(two_mode_squeezed(-1.0).is_err());
        for r in [0.0, 0.3, 1.0, 2.0, 3.0] {
            let s = two_mode_squeezed(r).unwrap();
            let det = s.cov().matrix().determinant();
            assert!((det - 1.0 / 16.0).abs() < 1e-9 * (4.0 * r).exp(), "r {r}: det {det}");
            assert!(validate(&s).passes);
        }
    }

    #[test]
    fn tmsv_is_lipschitz_in_r() {
        for r in [0.0, 0.5, 1.0] {
            for delta in [1e-1, 1e-3, 1e-6] {
                let a = two_mode_squeezed(r).unwrap();
                let b = two_mode_squeezed(r + delta).unwrap();
                let dist = linalg::max_abs(&(a.cov().matrix() - b.cov().matrix()));
                let bound = 2.0 * (2.0 * r).exp() * delta * (1.0 + delta);
                assert!(dist <= bound, "r {r} δ {delta}: {dist} > {bound}");
            }
        }
    }

    #[test]
    fn random_symplectic_is_symplectic_and_deterministic() {
        for seed in 0..20 {
            let s = random_symplectic(3, seed).unwrap();
            assert!(is_symplectic(&s, 1e-8));
            let again = random_symplectic(3, seed).unwrap();
            let bits = |m: &DMatrix<f64>| m.iter().map(|v| v.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(s.matrix()), bits(again.matrix()));
        }
        let zero = DMatrix::zeros(4, 4);
        assert_eq!(symplectic_from_generator(&zero).unwrap().matrix(), &DMatrix::identity(4, 4));
    }

    #[test]
    fn random_pure_is_pure() {
        for seed in 0..20 {
            let s = random_pure(2, seed).unwrap();
            let det = (s.cov().matrix() * 2.0).determinant();
            assert!((det - 1.0).abs() < 1e-6);
            assert!(validate(&s).min_eigenvalue >= -s.cov().default_tolerance());
        }
    }

    #[test]
    fn random_mixed_zero_noise_is_pure() {
        assert_eq!(random_mixed(2, 9, 0.0).unwrap().cov(), random_pure(2, 9).unwrap().cov());
        assert!(random_mixed(2, 9, -1.0).is_err());
    }

    #[test]
    fn separable_product_blocks() {
        let s = separable_product(2, 3).unwrap();
        assert_eq!(s.cov().dim(), 8);
        let m = s.cov().matrix();
        assert!(m.view((0, 4), (4, 4)).iter().all(|&x| x == 0.0));
        assert!(m.view((4, 0), (4, 4)).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn unphysical_state_rejected() {
        let cov = CovarianceMatrix::new(DMatrix::identity(2, 2) * 0.25, QuadratureOrdering::Interleaved).unwrap();
        assert!(matches!(GaussianState::new(cov, None), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn ensemble_members_are_reproducible() {
        let spec = EnsembleSpec {
            n_states: 4,
            n_modes_per_party: 1,
            kind: EnsembleKind::TwoModeSqueezed,
            seed: 11,
            params: EnsembleParams::default(),
        };
        spec.validate().unwrap();
        let a = spec.member(2).unwrap();
        let b = spec.member(2).unwrap();
        assert_eq!(a.state.cov(), b.state.cov());
        let r = a.state.provenance().unwrap().params["r_sq"];
        assert!((0.5..=2.0).contains(&r));
        assert_eq!(a.label, Some(Verdict::Entangled));
    }
}
