//! Random-matrix toolkit: Wishart spectra, the Marchenko–Pastur law,
//! spectral statistics and the log-gas energy.

mod log_gas;
mod mp;
mod stats;
mod wishart;

pub use log_gas::{log_gas_energy, SignConvention};
pub use mp::{mp_cdf, mp_mean, mp_pdf, mp_quantile, MPParams};
pub use stats::{empirical_density, ks_distance, ks_statistic, Binning, Histogram};
pub use wishart::{sample_wishart, wishart_matrix, SpectralSample};
