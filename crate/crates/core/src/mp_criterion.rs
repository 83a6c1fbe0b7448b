//! Spectral separability criterion: the eigenvalues of the partially
//! transposed covariance matrix are compared with the support of the
//! Marchenko–Pastur law at ratio r (default 1/2), and the Simon test is run
//! beside it as the reference.
//!
//! Λ is orthogonal, so `ΛVΛ` and `V` share their spectrum and this criterion
//! returns the same verdict on a state and on its partial transpose. The
//! harness here measures how the criterion compares with the exact test; it
//! does not assume it is correct. The support law is asymptotic, while a
//! covariance matrix has a fixed, finite spectrum; every verdict records the
//! mode count it was computed at.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::ppt::{partial_transpose, simon_check, Regime, Verdict};
use crate::random_matrix::{
    empirical_density, ks_statistic, mp_cdf, mp_pdf, Binning, Histogram, MPParams,
};
use crate::states::{EnsembleSpec, GaussianState};
use crate::symplectic::{CovarianceMatrix, PartitionSpec};

/// Rescaling applied to the spectrum before the support test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum Normalization {
    #[serde(rename = "none")]
    None,
    /// Divide by the mean eigenvalue.
    #[default]
    #[serde(rename = "mean-one")]
    MeanOne,
    /// Divide by trace/dimension; the same numbers as `MeanOne`.
    #[serde(rename = "trace-dim")]
    TraceDim,
}

/// Where the support window comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum BoundSource {
    /// `[(1 − √r)², (1 + √r)²]`.
    #[default]
    #[serde(rename = "formula")]
    Formula,
    /// The fixed window `[3 − 2√2, 3 + 2√2] = [(1 − √2)², (1 + √2)²]`,
    /// independent of r.
    #[serde(rename = "fixed")]
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MPCriterionConfig {
    pub r: f64,
    pub normalization: Normalization,
    /// Slack δ ≥ 0 added on both sides of the window.
    pub support_tol: f64,
    pub bound_source: BoundSource,
}

impl Default for MPCriterionConfig {
    fn default() -> Self {
        MPCriterionConfig {
            r: 0.5,
            normalization: Normalization::MeanOne,
            support_tol: 0.0,
            bound_source: BoundSource::Formula,
        }
    }
}

impl MPCriterionConfig {
    pub fn params(&self) -> Result<MPParams> {
        MPParams::new(self.r)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        if !(self.support_tol >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "support_tol {} must be ≥ 0",
                self.support_tol
            )));
        }
        Ok(())
    }

    /// Support window `[lo, hi]` before the δ slack.
    pub fn bounds(&self) -> Result<(f64, f64)> {
        Ok(match self.bound_source {
            BoundSource::Formula => {
                let p = self.params()?;
                (p.a(), p.b())
            }
            BoundSource::Fixed => {
                let s = 2.0 * std::f64::consts::SQRT_2;
                (3.0 - s, 3.0 + s)
            }
        })
    }
}

/// One eigenvalue outside the window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupportViolation {
    pub index: usize,
    pub value: f64,
    /// Distance from the nearest edge of `[lo, hi]`, without the slack.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MPVerdict {
    pub verdict: Verdict,
    pub n_modes: usize,
    pub eigenvalues_raw: Vec<f64>,
    pub eigenvalues_normalized: Vec<f64>,
    pub support_violations: Vec<SupportViolation>,
    /// KS distance of the normalized spectrum from MP(r); informational.
    pub ks_distance: f64,
    pub bounds: (f64, f64),
    pub config: MPCriterionConfig,
}

impl MPVerdict {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "criterion": "marchenko-pastur",
            "r": self.config.r,
            "normalization": self.config.normalization,
            "bound_source": self.config.bound_source,
            "bounds": [self.bounds.0, self.bounds.1],
            "support_tol": self.config.support_tol,
            "verdict": self.verdict,
            "n_modes": self.n_modes,
            "violations": self.support_violations,
            "ks_distance": self.ks_distance,
            "eigenvalues_raw": self.eigenvalues_raw,
            "eigenvalues_normalized": self.eigenvalues_normalized,
        })
    }
}

/// Applies `normalization` to a spectrum.
pub fn normalize(eigenvalues: &[f64], normalization: Normalization) -> Result<Vec<f64>> {
    match normalization {
        Normalization::None => Ok(eigenvalues.to_vec()),
        Normalization::MeanOne | Normalization::TraceDim => {
            let mean = eigenvalues.iter().sum::<f64>() / eigenvalues.len() as f64;
            if !(mean > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "cannot rescale a spectrum with mean {mean}"
                )));
            }
            Ok(eigenvalues.iter().map(|l| l / mean).collect())
        }
    }
}

/// Support test and KS score for an already computed, ascending spectrum.
pub fn assess_spectrum(
    eigenvalues: Vec<f64>,
    n_modes: usize,
    config: &MPCriterionConfig,
) -> Result<MPVerdict> {
    config.validate()?;
    let params = config.params()?;
    let (lo, hi) = config.bounds()?;
    let normalized = normalize(&eigenvalues, config.normalization)?;
    let support_violations: Vec<SupportViolation> = normalized
        .iter()
        .enumerate()
        .filter_map(|(index, &value)| {
            let distance = (lo - value).max(value - hi);
            (distance > config.support_tol).then_some(SupportViolation {
                index,
                value,
                distance,
            })
        })
        .collect();
    let verdict = if support_violations.is_empty() {
        Verdict::Separable
    } else {
        Verdict::Entangled
    };
    let ks_distance = ks_statistic(&normalized, |x| mp_cdf(x, &params));
    Ok(MPVerdict {
        verdict,
        n_modes,
        eigenvalues_raw: eigenvalues,
        eigenvalues_normalized: normalized,
        support_violations,
        ks_distance,
        bounds: (lo, hi),
        config: *config,
    })
}

/// Runs the spectral test on `cov` as given (no partial transpose).
pub fn mp_check_covariance(cov: &CovarianceMatrix, config: &MPCriterionConfig) -> Result<MPVerdict> {
    assess_spectrum(linalg::symmetric_eigenvalues(cov.matrix()), cov.n_modes(), config)
}

/// The spectral criterion on `Ṽ = ΛVΛ`.
pub fn mp_separability_check(
    state: &GaussianState,
    partition: &PartitionSpec,
    config: &MPCriterionConfig,
) -> Result<MPVerdict> {
    config.validate()?;
    let vt = partial_transpose(state.cov(), partition)?;
    mp_check_covariance(&vt, config)
}

/// Plot data: histogram of the normalized `Ṽ` spectrum and the MP(r) curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub histogram: Histogram,
    /// `(x, f(x))` on an even grid over `[0, b + 0.5]`.
    pub mp_curve: Vec<(f64, f64)>,
    pub ks_distance: f64,
}

pub fn spectrum_report(
    state: &GaussianState,
    partition: &PartitionSpec,
    config: &MPCriterionConfig,
    binning: &Binning,
    grid_points: usize,
) -> Result<SpectrumReport> {
    if grid_points < 2 {
        return Err(Error::InvalidParameter("grid needs at least 2 points".into()));
    }
    let verdict = mp_separability_check(state, partition, config)?;
    let histogram = empirical_density(&verdict.eigenvalues_normalized, binning)?;
    let params = config.params()?;
    let top = params.b() + 0.5;
    let mp_curve = (0..grid_points)
        .map(|i| {
            let x = top * i as f64 / (grid_points - 1) as f64;
            (x, mp_pdf(x, &params))
        })
        .collect();
    Ok(SpectrumReport {
        histogram,
        mp_curve,
        ks_distance: verdict.ks_distance,
    })
}

/// 2×2 table; rows are the reference verdict, columns the predicted one,
/// both ordered (separable, entangled).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
pub struct ConfusionMatrix {
    pub counts: [[usize; 2]; 2],
}

fn slot(v: Verdict) -> usize {
    match v {
        Verdict::Separable => 0,
        Verdict::Entangled => 1,
    }
}

impl ConfusionMatrix {
    pub fn record(&mut self, reference: Verdict, predicted: Verdict) {
        self.counts[slot(reference)][slot(predicted)] += 1;
    }
    pub fn get(&self, reference: Verdict, predicted: Verdict) -> usize {
        self.counts[slot(reference)][slot(predicted)]
    }
    pub fn total(&self) -> usize {
        self.counts.iter().flatten().sum()
    }
    pub fn agreements(&self) -> usize {
        self.counts[0][0] + self.counts[1][1]
    }
    pub fn agreement_rate(&self) -> f64 {
        match self.total() {
            0 => f64::NAN,
            t => self.agreements() as f64 / t as f64,
        }
    }

    /// Aligned text rendering with row/column headers.
    pub fn render(&self, reference: &str, predicted: &str) -> String {
        let head = format!("{reference} \\ {predicted}");
        let w = head.len().max(10);
        let mut out = format!("{head:<w$}  {:>10}  {:>10}\n", "separable", "entangled");
        for (name, row) in ["separable", "entangled"].iter().zip(&self.counts) {
            out.push_str(&format!("{name:<w$}  {:>10}  {:>10}\n", row[0], row[1]));
        }
        out
    }
}

/// Per-state entry of an [`AgreementReport`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StateRecord {
    pub index: usize,
    pub seed: u64,
    pub kind: String,
    pub label: Option<Verdict>,
    pub simon: Verdict,
    pub simon_min_eigenvalue: f64,
    pub simon_regime: Regime,
    pub mp: Verdict,
    pub mp_violations: usize,
    pub mp_ks_distance: f64,
    pub normalized_spectrum: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AgreementReport {
    pub config: MPCriterionConfig,
    pub n_states: usize,
    /// Reference = Simon, predicted = spectral criterion.
    pub mp_vs_simon: ConfusionMatrix,
    /// Reference = construction label (labelled members only).
    pub simon_vs_label: ConfusionMatrix,
    pub mp_vs_label: ConfusionMatrix,
    pub agreement_rate: f64,
    pub disagreeing_seeds: Vec<u64>,
    /// KS distance of all normalized spectra pooled together, against MP(r).
    pub pooled_ks_distance: f64,
    pub records: Vec<StateRecord>,
}

impl AgreementReport {
    /// Aggregates records; they are sorted by (seed, index) first, so the
    /// result does not depend on the order they were produced in.
    pub fn from_records(mut records: Vec<StateRecord>, config: &MPCriterionConfig) -> Result<Self> {
        records.sort_by_key(|r| (r.seed, r.index));
        let params = config.params()?;
        let mut mp_vs_simon = ConfusionMatrix::default();
        let mut simon_vs_label = ConfusionMatrix::default();
        let mut mp_vs_label = ConfusionMatrix::default();
        let mut disagreeing_seeds = Vec::new();
        let mut pooled = Vec::new();
        for r in &records {
            mp_vs_simon.record(r.simon, r.mp);
            if let Some(label) = r.label {
                simon_vs_label.record(label, r.simon);
                mp_vs_label.record(label, r.mp);
            }
            if r.simon != r.mp {
                disagreeing_seeds.push(r.seed);
            }
            pooled.extend_from_slice(&r.normalized_spectrum);
        }
        pooled.sort_by(f64::total_cmp);
        let pooled_ks_distance = if pooled.is_empty() {
            f64::NAN
        } else {
            ks_statistic(&pooled, |x| mp_cdf(x, &params))
        };
        Ok(AgreementReport {
            config: *config,
            n_states: records.len(),
            mp_vs_simon,
            simon_vs_label,
            mp_vs_label,
            agreement_rate: mp_vs_simon.agreement_rate(),
            disagreeing_seeds,
            pooled_ks_distance,
            records,
        })
    }

    pub fn render_tables(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.mp_vs_simon.render("simon", "mp"));
        if self.simon_vs_label.total() > 0 {
            out.push('\n');
            out.push_str(&self.simon_vs_label.render("label", "simon"));
            out.push('\n');
            out.push_str(&self.mp_vs_label.render("label", "mp"));
        }
        out.push_str(&format!(
            "\nstates {}  mp/simon agreement {:.4}  pooled KS {:.4}\n",
            self.n_states, self.agreement_rate, self.pooled_ks_distance
        ));
        out
    }
}

fn evaluate(
    ensemble: &EnsembleSpec,
    partition: &PartitionSpec,
    config: &MPCriterionConfig,
) -> Result<Vec<StateRecord>> {
    ensemble.validate()?;
    config.validate()?;
    (0..ensemble.n_states)
        .into_par_iter()
        .map(|index| {
            let member = ensemble.member(index)?;
            let simon = simon_check(&member.state, partition, None)?;
            let mp = mp_separability_check(&member.state, partition, config)?;
            Ok(StateRecord {
                index,
                seed: member.seed,
                kind: member
                    .state
                    .provenance()
                    .map(|p| p.kind.clone())
                    .unwrap_or_default(),
                label: member.label,
                simon: simon.verdict,
                simon_min_eigenvalue: simon.min_eigenvalue,
                simon_regime: simon.regime,
                mp: mp.verdict,
                mp_violations: mp.support_violations.len(),
                mp_ks_distance: mp.ks_distance,
                normalized_spectrum: mp.eigenvalues_normalized,
            })
        })
        .collect()
}

/// Runs both criteria on every member of `ensemble`.
pub fn compare_criteria(
    ensemble: &EnsembleSpec,
    partition: &PartitionSpec,
    config: &MPCriterionConfig,
) -> Result<AgreementReport> {
    AgreementReport::from_records(evaluate(ensemble, partition, config)?, config)
}

/// [`compare_criteria`] over several ensembles, each with its own default
/// partition, pooled into one report.
pub fn compare_ensembles(ensembles: &[EnsembleSpec], config: &MPCriterionConfig) -> Result<AgreementReport> {
    let mut records = Vec::new();
    for e in ensembles {
        records.extend(evaluate(e, &e.partition(), config)?);
    }
    AgreementReport::from_records(records, config)
}
