//! Phase-space conventions: quadrature orderings, the symplectic form Ω,
//! reordering between layouts, and the uncertainty relation.
//!
//! Units are ħ = 1 and covariances carry the symmetrizing factor one half,
//! `V_ab = ⟨Δξ_a Δξ_b + Δξ_b Δξ_a⟩ / 2`. The vacuum is therefore `V = I/2`
//! and a matrix is a bona fide covariance matrix exactly when
//! `V + iΩ/2 ≥ 0`.
//!
//! All matrices are stored in the [`QuadratureOrdering::Interleaved`] layout
//! unless a caller explicitly asks for another view through [`reorder`] or
//! [`CovarianceMatrix::to_ordering`].

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

/// Layout of the phase-space vector ξ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QuadratureOrdering {
    /// `(q₁, p₁, q₂, p₂, …, q_N, p_N)`.
    #[serde(rename = "interleaved")]
    Interleaved,
    /// `(q₁, …, q_N, p₁, …, p_N)`.
    #[serde(rename = "block_qp")]
    BlockQp,
    /// `(q_A…, q_B…, p_A…, p_B…)` for a balanced bipartition, modes of each
    /// party in ascending index order.
    #[serde(rename = "paper_bipartite")]
    Bipartite,
}

impl QuadratureOrdering {
    pub fn name(self) -> &'static str {
        match self {
            QuadratureOrdering::Interleaved => "interleaved",
            QuadratureOrdering::BlockQp => "block_qp",
            QuadratureOrdering::Bipartite => "paper_bipartite",
        }
    }
}

impl fmt::Display for QuadratureOrdering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QuadratureOrdering {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "interleaved" => Ok(QuadratureOrdering::Interleaved),
            "block_qp" => Ok(QuadratureOrdering::BlockQp),
            "paper_bipartite" => Ok(QuadratureOrdering::Bipartite),
            other => Err(Error::Parse(format!("unknown ordering {other:?}"))),
        }
    }
}

/// Bipartite split A|B, given by the 0-based mode indices of party B.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartitionSpec {
    party_b: BTreeSet<usize>,
}

impl PartitionSpec {
    pub fn new(party_b: impl IntoIterator<Item = usize>) -> Self {
        PartitionSpec {
            party_b: party_b.into_iter().collect(),
        }
    }

    /// Party B = the upper half of the modes, `n_modes/2 .. n_modes`
    /// (rounded so that party A gets the larger half).
    pub fn second_half(n_modes: usize) -> Self {
        PartitionSpec::new(n_modes.div_ceil(2)..n_modes)
    }

    /// Parses a comma-separated list of party-B mode indices, e.g. `"2,3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let modes = s
            .split(',')
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad mode index {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PartitionSpec::new(modes))
    }

    pub fn validate(&self, n_modes: usize) -> Result<()> {
        if self.party_b.is_empty() {
            return Err(Error::InvalidPartition("party B is empty".into()));
        }
        if let Some(&bad) = self.party_b.iter().find(|&&m| m >= n_modes) {
            return Err(Error::InvalidPartition(format!(
                "mode {bad} out of range for {n_modes} modes"
            )));
        }
        if self.party_b.len() == n_modes {
            return Err(Error::InvalidPartition("party A is empty".into()));
        }
        Ok(())
    }

    pub fn contains(&self, mode: usize) -> bool {
        self.party_b.contains(&mode)
    }

    pub fn party_b(&self) -> Vec<usize> {
        self.party_b.iter().copied().collect()
    }

    pub fn party_a(&self, n_modes: usize) -> Vec<usize> {
        (0..n_modes).filter(|m| !self.party_b.contains(m)).collect()
    }

    /// Mode counts `(|A|, |B|)`.
    pub fn sizes(&self, n_modes: usize) -> (usize, usize) {
        (n_modes - self.party_b.len(), self.party_b.len())
    }
}

/// `slots[2k + s]` is where quadrature `s` (0 = q, 1 = p) of mode `k` lives
/// in `ordering`.
pub(crate) fn slot_table(
    n_modes: usize,
    ordering: QuadratureOrdering,
    partition: Option<&PartitionSpec>,
) -> Result<Vec<usize>> {
    let dim = 2 * n_modes;
    let mut slots = vec![0; dim];
    match ordering {
        QuadratureOrdering::Interleaved => slots.iter_mut().enumerate().for_each(|(i, s)| *s = i),
        QuadratureOrdering::BlockQp => {
            for k in 0..n_modes {
                slots[2 * k] = k;
                slots[2 * k + 1] = n_modes + k;
            }
        }
        QuadratureOrdering::Bipartite => {
            let partition = partition.ok_or(Error::MissingPartition(ordering.name()))?;
            partition.validate(n_modes)?;
            let (na, nb) = partition.sizes(n_modes);
            if na != nb {
                return Err(Error::InvalidPartition(format!(
                    "{} needs equal party sizes, got {na}|{nb}",
                    ordering.name()
                )));
            }
            let order = partition
                .party_a(n_modes)
                .into_iter()
                .chain(partition.party_b());
            for (pos, k) in order.enumerate() {
                slots[2 * k] = pos;
                slots[2 * k + 1] = n_modes + pos;
            }
        }
    }
    Ok(slots)
}

/// Conjugates `m` by the permutation taking layout `from` to layout `to`:
/// returns `P·M·Pᵀ`. Entries are moved, never recomputed, so round trips
/// are exact.
pub fn reorder(
    m: &DMatrix<f64>,
    from: QuadratureOrdering,
    to: QuadratureOrdering,
    partition: Option<&PartitionSpec>,
) -> Result<DMatrix<f64>> {
    let n_modes = phase_space_modes(m)?;
    let src = slot_table(n_modes, from, partition)?;
    let dst = slot_table(n_modes, to, partition)?;
    let dim = m.nrows();
    let mut out = DMatrix::zeros(dim, dim);
    for u in 0..dim {
        for v in 0..dim {
            out[(dst[u], dst[v])] = m[(src[u], src[v])];
        }
    }
    Ok(out)
}

/// The permutation matrix `P` used by [`reorder`].
pub fn permutation_matrix(
    n_modes: usize,
    from: QuadratureOrdering,
    to: QuadratureOrdering,
    partition: Option<&PartitionSpec>,
) -> Result<DMatrix<f64>> {
    let src = slot_table(n_modes, from, partition)?;
    let dst = slot_table(n_modes, to, partition)?;
    let dim = 2 * n_modes;
    let mut p = DMatrix::zeros(dim, dim);
    for u in 0..dim {
        p[(dst[u], src[u])] = 1.0;
    }
    Ok(p)
}

fn phase_space_modes(m: &DMatrix<f64>) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let dim = m.nrows();
    if dim == 0 || !dim.is_multiple_of(2) {
        return Err(Error::OddDimension(dim));
    }
    Ok(dim / 2)
}

/// The antisymmetric form Ω with `[ξ_a, ξ_b] = iΩ_ab`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    n_modes: usize,
    matrix: DMatrix<f64>,
    ordering: QuadratureOrdering,
}

impl SymplecticForm {
    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
    pub fn ordering(&self) -> QuadratureOrdering {
        self.ordering
    }
}

/// Ω for `n_modes` modes. Interleaved gives `diag(J, …, J)` with
/// `J = [[0, 1], [−1, 0]]`; both q-then-p layouts give `[[0, I], [−I, 0]]`
/// (the bipartite layout permutes q's and p's identically, so Ω does not
/// depend on the partition).
///
/// # Panics
/// If `n_modes == 0`.
pub fn build_omega(n_modes: usize, ordering: QuadratureOrdering) -> SymplecticForm {
    assert!(n_modes >= 1, "need at least one mode");
    let dim = 2 * n_modes;
    let mut m = DMatrix::zeros(dim, dim);
    for k in 0..n_modes {
        let (q, p) = match ordering {
            QuadratureOrdering::Interleaved => (2 * k, 2 * k + 1),
            QuadratureOrdering::BlockQp | QuadratureOrdering::Bipartite => (k, n_modes + k),
        };
        m[(q, p)] = 1.0;
        m[(p, q)] = -1.0;
    }
    SymplecticForm {
        n_modes,
        matrix: m,
        ordering,
    }
}

/// Real symmetric `2N × 2N` covariance matrix tagged with its layout.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n_modes: usize,
    matrix: DMatrix<f64>,
    ordering: QuadratureOrdering,
    partition: Option<PartitionSpec>,
}

/// Relative asymmetry accepted by [`CovarianceMatrix::new`].
pub const ASYMMETRY_LIMIT: f64 = 1e-8;

impl CovarianceMatrix {
    /// Checks shape, finiteness and symmetry, then stores `(M + Mᵀ)/2`.
    /// Rejects asymmetry above `1e-8 · ‖M‖_max`.
    pub fn new(matrix: DMatrix<f64>, ordering: QuadratureOrdering) -> Result<Self> {
        Self::with_partition(matrix, ordering, None)
    }

    /// As [`new`](Self::new); `partition` is required for the bipartite layout.
    pub fn with_partition(
        matrix: DMatrix<f64>,
        ordering: QuadratureOrdering,
        partition: Option<PartitionSpec>,
    ) -> Result<Self> {
        let n_modes = phase_space_modes(&matrix)?;
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let asymmetry = linalg::max_asymmetry(&matrix);
        let limit = ASYMMETRY_LIMIT * linalg::max_abs(&matrix);
        if asymmetry > limit {
            return Err(Error::NonSymmetric { asymmetry, limit });
        }
        let partition = match ordering {
            QuadratureOrdering::Bipartite => {
                // Validates the split as a side effect.
                slot_table(n_modes, ordering, partition.as_ref())?;
                partition
            }
            _ => None,
        };
        Ok(CovarianceMatrix {
            n_modes,
            matrix: linalg::symmetrize(&matrix),
            ordering,
            partition,
        })
    }

    pub(crate) fn from_symmetric(matrix: DMatrix<f64>, ordering: QuadratureOrdering) -> Self {
        debug_assert_eq!(linalg::max_asymmetry(&matrix), 0.0);
        CovarianceMatrix {
            n_modes: matrix.nrows() / 2,
            matrix,
            ordering,
            partition: None,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }
    pub fn dim(&self) -> usize {
        2 * self.n_modes
    }
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
    pub fn ordering(&self) -> QuadratureOrdering {
        self.ordering
    }
    pub fn partition(&self) -> Option<&PartitionSpec> {
        self.partition.as_ref()
    }

    /// Same state, viewed in another layout. `partition` is needed when
    /// either side is the bipartite layout and the matrix does not already
    /// carry one.
    pub fn to_ordering(
        &self,
        to: QuadratureOrdering,
        partition: Option<&PartitionSpec>,
    ) -> Result<CovarianceMatrix> {
        if to == self.ordering {
            return Ok(self.clone());
        }
        let partition = partition.or(self.partition.as_ref());
        let matrix = reorder(&self.matrix, self.ordering, to, partition)?;
        Ok(CovarianceMatrix {
            n_modes: self.n_modes,
            matrix,
            ordering: to,
            partition: match to {
                QuadratureOrdering::Bipartite => partition.cloned(),
                _ => None,
            },
        })
    }

    /// `S·V·Sᵀ`: the covariance after the linear canonical map `ξ → Sξ`.
    pub fn transform(&self, s: &SymplecticMatrix) -> Result<CovarianceMatrix> {
        if s.ordering != self.ordering {
            return Err(Error::OrderingMismatch {
                left: self.ordering.name(),
                right: s.ordering.name(),
            });
        }
        if s.matrix.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.matrix.nrows(),
            });
        }
        let out = &s.matrix * &self.matrix * s.matrix.transpose();
        Ok(CovarianceMatrix {
            n_modes: self.n_modes,
            matrix: linalg::symmetrize(&out),
            ordering: self.ordering,
            partition: self.partition.clone(),
        })
    }

    /// `1e-9 · max(1, ‖V‖_max)`.
    pub fn default_tolerance(&self) -> f64 {
        1e-9 * linalg::max_abs(&self.matrix).max(1.0)
    }
}

/// Outcome of the uncertainty relation test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UncertaintyReport {
    /// Smallest eigenvalue of the Hermitian matrix `V + iΩ/2`.
    pub min_eigenvalue: f64,
    pub passes: bool,
    pub tol: f64,
}

/// Tests `V + iΩ/2 ≥ 0` up to `tol` (default: [`CovarianceMatrix::default_tolerance`]).
pub fn uncertainty_check(v: &CovarianceMatrix, tol: Option<f64>) -> UncertaintyReport {
    let tol = tol.unwrap_or_else(|| v.default_tolerance());
    let omega = build_omega(v.n_modes, v.ordering);
    let half_omega = omega.matrix * 0.5;
    let min_eigenvalue = linalg::hermitian_min_eigenvalue(&v.matrix, &half_omega);
    UncertaintyReport {
        min_eigenvalue,
        passes: min_eigenvalue >= -tol,
        tol,
    }
}

/// Real `2N × 2N` matrix meant to act as a linear canonical transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix {
    matrix: DMatrix<f64>,
    ordering: QuadratureOrdering,
}

impl SymplecticMatrix {
    /// Only the shape is checked here; use [`is_symplectic`] for the rest.
    pub fn new(matrix: DMatrix<f64>, ordering: QuadratureOrdering) -> Result<Self> {
        phase_space_modes(&matrix)?;
        Ok(SymplecticMatrix { matrix, ordering })
    }

    pub fn identity(n_modes: usize, ordering: QuadratureOrdering) -> Self {
        SymplecticMatrix {
            matrix: DMatrix::identity(2 * n_modes, 2 * n_modes),
            ordering,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.matrix.nrows() / 2
    }
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
    pub fn ordering(&self) -> QuadratureOrdering {
        self.ordering
    }
    pub fn transpose(&self) -> SymplecticMatrix {
        SymplecticMatrix {
            matrix: self.matrix.transpose(),
            ordering: self.ordering,
        }
    }
}

/// `‖SᵀΩS − Ω‖_max`.
pub fn symplectic_defect(s: &SymplecticMatrix) -> f64 {
    let omega = build_omega(s.n_modes(), s.ordering);
    let lhs = s.matrix.transpose() * &omega.matrix * &s.matrix;
    linalg::max_abs(&(lhs - omega.matrix))
}

/// `‖SᵀΩS − Ω‖_max ≤ tol`.
pub fn is_symplectic(s: &SymplecticMatrix, tol: f64) -> bool {
    symplectic_defect(s) <= tol
}
