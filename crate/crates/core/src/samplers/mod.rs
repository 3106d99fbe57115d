//! Sampling and sketching primitives.

mod f0;
pub mod hash;
mod l0;
mod reservoir;

use thiserror::Error;

pub use f0::F0Sketch;
pub use l0::{l0_sample_set, L0SampleSet, L0Sampler, SampleExtraction, MAX_UNIVERSE};
pub use reservoir::Reservoir;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SamplerError {
    #[error("index {0} outside the sampler universe")]
    IndexOutOfRange(u128),
    #[error("universe of size {0} is not supported")]
    UniverseTooLarge(u128),
    #[error("sketches built with different seeds or retention sizes")]
    SeedMismatch,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("corrupt sketch blob: {0}")]
    Corrupt(String),
}

/// Deterministic child seed `i` of `seed`.
pub fn derive_seed(seed: u64, i: u64) -> u64 {
    hash::mix64(i, seed ^ 0x5eed_5eed_5eed_5eed)
}
