//! Seeded randomness.
//!
//! Every stochastic routine in the crate draws from [`ChaCha8Rng`], seeded
//! with a `u64` through [`seeded_rng`]. ChaCha output is specified bit-for-bit
//! and independent of platform endianness or word size, so a seed pins the
//! whole stream. Normal deviates come from `rand_distr::StandardNormal`
//! (ziggurat), which is also deterministic given the stream.
//!
//! Ensemble members get their own seed from [`derive_seed`], which hashes the
//! member index into the base seed with SplitMix64. Members can then be
//! generated in any order, or in parallel, without changing any of them.

use rand::SeedableRng;
pub use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// One SplitMix64 output step.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for member `index` of an ensemble with base seed `base`:
/// `splitmix64(base ^ splitmix64(index))`.
pub fn derive_seed(base: u64, index: u64) -> u64 {
    splitmix64(base ^ splitmix64(index))
}
