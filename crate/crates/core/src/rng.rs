//! Seed plumbing: one run seed, independently derived streams.
//!
//! Parallel trials, restarts, and battery members each get their own stream
//! so results are reproducible from a single seed regardless of scheduling.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::abstraction::splitmix64;

/// Derives the seed for an independent stream.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream.wrapping_add(0xa076_1d64_78bd_642f)))
}

/// A deterministic, platform-independent generator for one stream.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, stream))
}
