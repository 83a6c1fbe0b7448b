//! Partial transposition at the covariance level and the Simon
//! (Peres–Horodecki) separability test.
//!
//! Transposing party B's density operator acts on the Wigner function as
//! `p_B → −p_B`, i.e. as the mirror `Λ = diag(±1)` with −1 on B's momentum
//! slots. On covariances this is `Ṽ = ΛVΛ`, and a separable state must give
//! a physical `Ṽ`: `Ṽ + iΩ/2 ≥ 0`.
//!
//! The test is necessary and sufficient when one party holds a single mode
//! (1×N splits); for larger splits it is necessary only, and
//! [`SimonReport::regime`] records which case applies.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::states::GaussianState;
use crate::symplectic::{
    build_omega, slot_table, uncertainty_check, CovarianceMatrix, PartitionSpec,
    QuadratureOrdering,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Separable,
    Entangled,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Separable => "separable",
            Verdict::Entangled => "entangled",
        })
    }
}

/// Whether a PPT verdict settles separability.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "necessary-only")]
    NecessaryOnly,
}

impl Regime {
    pub fn for_partition(partition: &PartitionSpec, n_modes: usize) -> Regime {
        let (a, b) = partition.sizes(n_modes);
        if a.min(b) == 1 {
            Regime::Exact
        } else {
            Regime::NecessaryOnly
        }
    }
}

/// Diagonal of Λ in a given layout.
#[derive(Debug, Clone, PartialEq)]
pub struct MirrorMap {
    diagonal: Vec<f64>,
    ordering: QuadratureOrdering,
}

impl MirrorMap {
    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }
    pub fn ordering(&self) -> QuadratureOrdering {
        self.ordering
    }
    pub fn to_matrix(&self) -> DMatrix<f64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&self.diagonal))
    }
}

/// Λ for flipping party B's momenta. `layout` is the bipartition that defines
/// a [`QuadratureOrdering::Bipartite`] layout; it defaults to `partition`.
fn mirror_in_layout(
    n_modes: usize,
    partition: &PartitionSpec,
    ordering: QuadratureOrdering,
    layout: Option<&PartitionSpec>,
) -> Result<MirrorMap> {
    partition.validate(n_modes)?;
    let slots = slot_table(n_modes, ordering, layout.or(Some(partition)))?;
    let mut diagonal = vec![1.0; 2 * n_modes];
    for k in partition.party_b() {
        diagonal[slots[2 * k + 1]] = -1.0;
    }
    Ok(MirrorMap { diagonal, ordering })
}

/// Mirror reflection Λ: +1 on every q slot and on A's p slots, −1 on B's p slots.
pub fn mirror_matrix(
    n_modes: usize,
    partition: &PartitionSpec,
    ordering: QuadratureOrdering,
) -> Result<MirrorMap> {
    mirror_in_layout(n_modes, partition, ordering, None)
}

/// `Ṽ = ΛVΛ`, computed entrywise as `λ_i λ_j V_ij` so that applying it twice
/// returns `V` bit for bit.
pub fn partial_transpose(v: &CovarianceMatrix, partition: &PartitionSpec) -> Result<CovarianceMatrix> {
    let lambda = mirror_in_layout(v.n_modes(), partition, v.ordering(), v.partition())?;
    let d = &lambda.diagonal;
    let m = v.matrix();
    let flipped = DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        if d[i] * d[j] < 0.0 {
            -m[(i, j)]
        } else {
            m[(i, j)]
        }
    });
    CovarianceMatrix::with_partition(flipped, v.ordering(), v.partition().cloned())
}

/// Slot table for the paired layout
/// `(q_A1, q_B1, …, q_An, q_Bn, p_A1, p_B1, …, p_An, p_Bn)`.
fn paired_slots(n_modes: usize, partition: &PartitionSpec) -> Result<Vec<usize>> {
    partition.validate(n_modes)?;
    let (na, nb) = partition.sizes(n_modes);
    if na != nb {
        return Err(Error::InvalidPartition(format!(
            "paired layout needs equal party sizes, got {na}|{nb}"
        )));
    }
    let mut slots = vec![0; 2 * n_modes];
    for (i, (a, b)) in partition
        .party_a(n_modes)
        .into_iter()
        .zip(partition.party_b())
        .enumerate()
    {
        slots[2 * a] = 2 * i;
        slots[2 * b] = 2 * i + 1;
        slots[2 * a + 1] = n_modes + 2 * i;
        slots[2 * b + 1] = n_modes + 2 * i + 1;
    }
    Ok(slots)
}

/// Interleaved matrix → paired A/B layout.
pub fn to_paired_layout(m: &DMatrix<f64>, partition: &PartitionSpec) -> Result<DMatrix<f64>> {
    let slots = paired_slots(m.nrows() / 2, partition)?;
    let dim = m.nrows();
    let mut out = DMatrix::zeros(dim, dim);
    for u in 0..dim {
        for v in 0..dim {
            out[(slots[u], slots[v])] = m[(u, v)];
        }
    }
    Ok(out)
}

/// Paired A/B layout → interleaved matrix.
pub fn from_paired_layout(m: &DMatrix<f64>, partition: &PartitionSpec) -> Result<DMatrix<f64>> {
    let slots = paired_slots(m.nrows() / 2, partition)?;
    let dim = m.nrows();
    Ok(DMatrix::from_fn(dim, dim, |u, v| m[(slots[u], slots[v])]))
}

/// Replaces every 2×2 block `σ_ij` of a matrix by `σ_ijᵀ`. The block grid
/// must be even (dimension divisible by 4), as it is for a paired layout.
pub fn block_transpose_paired(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    let dim = m.nrows();
    if dim == 0 || !dim.is_multiple_of(4) {
        return Err(Error::InvalidParameter(format!(
            "block grid of a {dim}x{dim} matrix is not an even grid of 2x2 blocks"
        )));
    }
    Ok(DMatrix::from_fn(dim, dim, |r, c| {
        let (bi, bj) = (r / 2, c / 2);
        m[(2 * bi + c % 2, 2 * bj + r % 2)]
    }))
}

/// Blockwise route: view `V` in the paired A/B layout, transpose each 2×2
/// block, and return to `V`'s own layout.
///
/// The result is symmetric and the map is an involution, but it is a
/// permutation of entries, whereas `ΛVΛ` changes signs. The two routes
/// coincide only on matrices whose B-momentum cross terms vanish; compare
/// with [`partial_transpose`] before relying on it.
pub fn block_transpose(v: &CovarianceMatrix, partition: &PartitionSpec) -> Result<CovarianceMatrix> {
    let inter = v.to_ordering(QuadratureOrdering::Interleaved, None)?;
    let paired = to_paired_layout(inter.matrix(), partition)?;
    let swapped = block_transpose_paired(&paired)?;
    let back = from_paired_layout(&swapped, partition)?;
    let out = CovarianceMatrix::new(back, QuadratureOrdering::Interleaved)?;
    out.to_ordering(v.ordering(), v.partition())
}

/// Result of [`simon_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimonReport {
    pub verdict: Verdict,
    /// Smallest eigenvalue of `Ṽ + iΩ/2`.
    pub min_eigenvalue: f64,
    pub regime: Regime,
    pub tol: f64,
    /// `|min_eigenvalue| ≤ tol`: on the PPT boundary, reported separable.
    pub boundary: bool,
}

impl SimonReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "criterion": "simon",
            "verdict": self.verdict,
            "min_eigenvalue": self.min_eigenvalue,
            "regime": self.regime,
            "tol": self.tol,
            "boundary": self.boundary,
        })
    }
}

/// Minimum eigenvalue of `Ṽ + iΩ/2` for an arbitrary symmetric `V`.
pub fn pt_min_eigenvalue(v: &CovarianceMatrix, partition: &PartitionSpec) -> Result<f64> {
    let vt = partial_transpose(v, partition)?;
    let omega = build_omega(v.n_modes(), v.ordering());
    Ok(linalg::hermitian_min_eigenvalue(vt.matrix(), &(omega.matrix() * 0.5)))
}

/// Simon's PPT test. `tol` defaults to the state's uncertainty tolerance;
/// entangled ⇔ `min eig(Ṽ + iΩ/2) < −tol`.
pub fn simon_check(
    state: &GaussianState,
    partition: &PartitionSpec,
    tol: Option<f64>,
) -> Result<SimonReport> {
    let v = state.cov();
    partition.validate(v.n_modes())?;
    let tol = tol.unwrap_or_else(|| v.default_tolerance());
    let physical = uncertainty_check(v, Some(tol));
    if !physical.passes {
        return Err(Error::Unphysical {
            min_eigenvalue: physical.min_eigenvalue,
            tol,
        });
    }
    let min_eigenvalue = pt_min_eigenvalue(v, partition)?;
    let verdict = if min_eigenvalue < -tol {
        Verdict::Entangled
    } else {
        Verdict::Separable
    };
    Ok(SimonReport {
        verdict,
        min_eigenvalue,
        regime: Regime::for_partition(partition, v.n_modes()),
        tol,
        boundary: min_eigenvalue.abs() <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{random_mixed, random_pure, separable_product, two_mode_squeezed, vacuum};

    #[test]
    fn mirror_two_modes_flips_p2() {
        let l = mirror_matrix(2, &PartitionSpec::new([1]), QuadratureOrdering::Interleaved).unwrap();
        assert_eq!(l.diagonal(), &[1.0, 1.0, 1.0, -1.0]);
        let m = l.to_matrix();
        assert_eq!(&m * &m, DMatrix::identity(4, 4));
    }

    #[test]
    fn mirror_block_layout() {
        let l = mirror_matrix(4, &PartitionSpec::new([2, 3]), QuadratureOrdering::BlockQp).unwrap();
        assert_eq!(l.diagonal(), &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0]);
        // Bipartite layout: the last n slots are exactly p_B.
        let l = mirror_matrix(4, &PartitionSpec::new([0, 3]), QuadratureOrdering::Bipartite).unwrap();
        assert_eq!(l.diagonal(), &[1.0, 1.0, 1.0, 1.0, 1.0, 1.0, -1.0, -1.0]);
    }

    #[test]
    fn mirror_rejects_bad_partitions() {
        for bad in [PartitionSpec::new([]), PartitionSpec::new([0, 1])] {
            assert!(mirror_matrix(2, &bad, QuadratureOrdering::Interleaved).is_err());
        }
    }

    #[test]
    fn diagonal_matrix_is_fixed() {
        let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]));
        let v = CovarianceMatrix::new(d, QuadratureOrdering::Interleaved).unwrap();
        assert_eq!(partial_transpose(&v, &PartitionSpec::new([1])).unwrap(), v);
    }

    #[test]
    fn tmsv_pt_flips_pp_correlation() {
        let r: f64 = 1.0;
        let s = 0.5 * (2.0 * r).sinh();
        let state = two_mode_squeezed(r).unwrap();
        let vt = partial_transpose(state.cov(), &PartitionSpec::new([1])).unwrap();
        let m = vt.matrix();
        assert_eq!(m[(0, 2)], s);
        assert_eq!(m[(1, 3)], s); // was −s
        assert_eq!(m[(3, 1)], s);
    }

    #[test]
    fn pt_is_an_exact_involution() {
        let part = PartitionSpec::new([1, 2]);
        for seed in 0..20 {
            let v = random_mixed(3, seed, 0.2).unwrap();
            let twice = partial_transpose(&partial_transpose(v.cov(), &part).unwrap(), &part).unwrap();
            assert_eq!(&twice, v.cov());
        }
    }

    #[test]
    fn pt_in_other_layouts_agrees() {
        let part = PartitionSpec::new([1]);
        let v = random_pure(2, 5).unwrap();
        let reference = partial_transpose(v.cov(), &part).unwrap();
        for o in [QuadratureOrdering::BlockQp, QuadratureOrdering::Bipartite] {
            let viewed = v.cov().to_ordering(o, Some(&part)).unwrap();
            let pt = partial_transpose(&viewed, &part).unwrap();
            let back = pt.to_ordering(QuadratureOrdering::Interleaved, None).unwrap();
            assert_eq!(back, reference);
        }
    }

    #[test]
    fn block_transpose_fixes_symmetric_blocks() {
        let m = DMatrix::from_fn(8, 8, |i, j| {
            let (bi, bj) = (i / 2, j / 2);
            let (a, b) = (i % 2, j % 2);
            // Each block symmetric; block (bi, bj) = block (bj, bi).
            (bi + bj) as f64 + (a + b) as f64 * 0.1
        });
        assert_eq!(block_transpose_paired(&m).unwrap(), m);
    }

    #[test]
    fn block_transpose_negates_antisymmetric_block() {
        let mut m = DMatrix::zeros(4, 4);
        m[(0, 3)] = 1.0; // block (0,1) = [[0, 1], [−1, 0]]
        m[(1, 2)] = -1.0;
        m[(3, 0)] = 1.0; // mirror so the matrix stays symmetric
        m[(2, 1)] = -1.0;
        let t = block_transpose_paired(&m).unwrap();
        assert_eq!(t[(0, 3)], -1.0);
        assert_eq!(t[(1, 2)], 1.0);
        assert_eq!(block_transpose_paired(&t).unwrap(), m);
    }

    #[test]
    fn block_transpose_rejects_odd_grid() {
        assert!(block_transpose_paired(&DMatrix::zeros(6, 6)).is_err());
        assert!(block_transpose(vacuum(3).unwrap().cov(), &PartitionSpec::new([2])).is_err());
    }

    #[test]
    fn paired_layout_round_trip() {
        let part = PartitionSpec::new([0, 3]);
        let m = DMatrix::from_fn(8, 8, |i, j| (i * 8 + j) as f64);
        assert_eq!(from_paired_layout(&to_paired_layout(&m, &part).unwrap(), &part).unwrap(), m);
    }

    #[test]
    fn simon_vacuum_separable() {
        let r = simon_check(&vacuum(2).unwrap(), &PartitionSpec::new([1]), None).unwrap();
        assert_eq!(r.verdict, Verdict::Separable);
        assert!(r.min_eigenvalue.abs() < 1e-12);
        assert!(r.boundary);
        assert_eq!(r.regime, Regime::Exact);
    }

    #[test]
    fn simon_tmsv_entangled() {
        let r = simon_check(&two_mode_squeezed(1.0).unwrap(), &PartitionSpec::new([1]), None).unwrap();
        assert_eq!(r.verdict, Verdict::Entangled);
        assert!((r.min_eigenvalue - ((-2.0f64).exp() - 1.0) / 2.0).abs() < 1e-10);
        assert!(!r.boundary);
    }

    #[test]
    fn simon_sweep_over_squeezing() {
        let part = PartitionSpec::new([1]);
        for r in [0.0, 0.01, 0.1, 0.5, 1.0, 2.0] {
            let rep = simon_check(&two_mode_squeezed(r).unwrap(), &part, None).unwrap();
            let expected = if r == 0.0 { Verdict::Separable } else { Verdict::Entangled };
            assert_eq!(rep.verdict, expected, "r = {r}");
        }
    }

    #[test]
    fn simon_regimes() {
        let s = separable_product(2, 1).unwrap();
        let r = simon_check(&s, &PartitionSpec::second_half(4), None).unwrap();
        assert_eq!(r.regime, Regime::NecessaryOnly);
        assert_eq!(r.verdict, Verdict::Separable);
        let r = simon_check(&s, &PartitionSpec::new([3]), None).unwrap();
        assert_eq!(r.regime, Regime::Exact);
    }

    #[test]
    fn simon_partition_mismatch() {
        let s = vacuum(2).unwrap();
        assert!(simon_check(&s, &PartitionSpec::new([2]), None).is_err());
    }

    #[test]
    fn simon_report_json_fields() {
        let r = simon_check(&vacuum(2).unwrap(), &PartitionSpec::new([1]), None).unwrap();
        let j = r.to_json();
        assert_eq!(j["criterion"], "simon");
        assert_eq!(j["verdict"], "separable");
        assert_eq!(j["regime"], "exact");
    }
}
