//! Counter-based random streams.
//!
//! Every random draw in the crate comes from a ChaCha stream addressed by
//! `(seed, stream)`. Work split across threads uses one stream per trial, so
//! results never depend on how many workers ran.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random generator for trial `stream` of an experiment seeded with `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Seed/stream record attached to sampled objects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub stream: u64,
}
