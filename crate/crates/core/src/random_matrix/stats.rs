use serde::Serialize;

use super::mp::{mp_cdf, MPParams};
use super::wishart::SpectralSample;
use crate::error::{Error, Result};

/// Two-sided Kolmogorov–Smirnov statistic of sorted `values` against `cdf`:
/// `max_i max(i/m − F(x_i), F(x_i) − (i − 1)/m)`.
pub fn ks_statistic(sorted: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let m = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / m - f;
            let below = f - i as f64 / m;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// KS distance between a spectrum and the Marchenko–Pastur CDF.
pub fn ks_distance(sample: &SpectralSample, params: &MPParams) -> f64 {
    ks_statistic(&sample.eigenvalues, |x| mp_cdf(x, params))
}

/// Bin choice for [`empirical_density`].
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Binning {
    /// Width `2·IQR·m^(−1/3)`, falling back to `⌈√m⌉` bins when the IQR is 0.
    #[default]
    FreedmanDiaconis,
    /// Equal-width bins over the sample range.
    Count(usize),
    /// Explicit ascending edges.
    Edges(Vec<f64>),
}

/// Density histogram: `Σ density·width = 1` over the bins.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
}

impl Histogram {
    pub fn total_mass(&self) -> f64 {
        self.densities
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(d, w)| d * (w[1] - w[0]))
            .sum()
    }

    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.bin_edges
            .windows(2)
            .zip(&self.densities)
            .map(|(w, &d)| (w[0], w[1], d))
    }
}

fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn uniform_edges(lo: f64, hi: f64, bins: usize) -> Vec<f64> {
    (0..=bins)
        .map(|i| {
            if i == bins {
                hi
            } else {
                lo + (hi - lo) * i as f64 / bins as f64
            }
        })
        .collect()
}

/// Normalized histogram of `values`. Values outside explicit edges are
/// dropped; the rightmost edge is inclusive.
pub fn empirical_density(values: &[f64], binning: &Binning) -> Result<Histogram> {
    if values.is_empty() {
        return Err(Error::InvalidParameter("histogram of an empty sample".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (mut lo, mut hi) = (sorted[0], sorted[sorted.len() - 1]);
    if lo == hi {
        let half = 0.5 * lo.abs().max(1.0);
        lo -= half;
        hi += half;
    }
    let m = sorted.len();
    let edges = match binning {
        Binning::Edges(e) => {
            if e.len() < 2 || e.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::InvalidParameter("bin edges must be strictly increasing".into()));
            }
            e.clone()
        }
        Binning::Count(k) => {
            if *k == 0 {
                return Err(Error::InvalidParameter("need at least one bin".into()));
            }
            uniform_edges(lo, hi, *k)
        }
        Binning::FreedmanDiaconis => {
            let iqr = quantile_sorted(&sorted, 0.75) - quantile_sorted(&sorted, 0.25);
            let bins = if iqr > 0.0 {
                let width = 2.0 * iqr / (m as f64).cbrt();
                ((hi - lo) / width).ceil().max(1.0) as usize
            } else {
                (m as f64).sqrt().ceil() as usize
            };
            uniform_edges(lo, hi, bins)
        }
    };
    let bins = edges.len() - 1;
    let mut counts = vec![0usize; bins];
    let mut kept = 0usize;
    for &x in &sorted {
        if x < edges[0] || x > edges[bins] {
            continue;
        }
        // Index of the last edge ≤ x, with the top edge folded into the last bin.
        let idx = edges.partition_point(|&e| e <= x).saturating_sub(1).min(bins - 1);
        counts[idx] += 1;
        kept += 1;
    }
    if kept == 0 {
        return Err(Error::InvalidParameter("no sample falls inside the bin edges".into()));
    }
    let densities = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, w)| c as f64 / (kept as f64 * (w[1] - w[0])))
        .collect();
    Ok(Histogram {
        bin_edges: edges,
        densities,
    })
}
