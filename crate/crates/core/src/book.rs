// The chapters of book/ are compiled here as doc comments so that
// `cargo test --doc` runs every Rust snippet in them.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/conventions.md")]
pub mod conventions {}
#[doc = include_str!("../../../book/src/uncertainty.md")]
pub mod uncertainty {}
#[doc = include_str!("../../../book/src/states.md")]
pub mod states {}
#[doc = include_str!("../../../book/src/ppt.md")]
pub mod ppt {}
#[doc = include_str!("../../../book/src/marchenko_pastur.md")]
pub mod marchenko_pastur {}
#[doc = include_str!("../../../book/src/spectral_criterion.md")]
pub mod spectral_criterion {}
#[doc = include_str!("../../../book/src/comparison.md")]
pub mod comparison {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
