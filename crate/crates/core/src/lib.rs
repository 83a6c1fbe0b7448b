//! Separability tests for Gaussian states at the covariance-matrix level.
//!
//! * [`symplectic`]: orderings, Ω, reordering, the uncertainty relation.
//! * [`states`]: vacuum, thermal, two-mode squeezed and seeded random states.
//! * [`ppt`]: partial transposition as a momentum mirror and the Simon test.
//! * [`random_matrix`]: Wishart spectra, the Marchenko–Pastur law, KS
//!   distance, histograms, log-gas energy.
//! * [`mp_criterion`]: the spectral support criterion and a harness that
//!   compares it with the Simon test.
//! * [`cli`]: the `gaussmp` binary.
//!
//! Conventions: ħ = 1, `V_ab = ⟨{Δξ_a, Δξ_b}⟩/2`, vacuum `V = I/2`.
//!
//! ```
//! use gaussmp::ppt::{simon_check, Verdict};
//! use gaussmp::states::two_mode_squeezed;
//! use gaussmp::symplectic::PartitionSpec;
//!
//! let state = two_mode_squeezed(1.0)?;
//! let report = simon_check(&state, &PartitionSpec::new([1]), None)?;
//! assert_eq!(report.verdict, Verdict::Entangled);
//! assert!((report.min_eigenvalue - ((-2.0f64).exp() - 1.0) / 2.0).abs() < 1e-9);
//! # Ok::<(), gaussmp::Error>(())
//! ```

pub mod cli;
pub mod error;
pub mod expm;
pub mod io;
pub mod linalg;
pub mod mp_criterion;
pub mod ppt;
pub mod quadrature;
pub mod random_matrix;
pub mod rng;
pub mod states;
pub mod symplectic;

#[cfg(doctest)]
mod book;

pub use error::{Error, Result};
