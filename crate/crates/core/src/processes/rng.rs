//! Seed splitting.
//!
//! Every random stream in a trial is a ChaCha8 generator seeded by mixing the
//! master seed with a path of stream identifiers through the SplitMix64
//! finalizer. Streams with different paths are independent for all practical
//! purposes, so adversary labels never depend on learner randomness.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream identifiers used across the crate.
pub mod stream {
    pub const POINTS: u64 = 1;
    pub const LABELS: u64 = 2;
    pub const TARGET: u64 = 3;
    pub const ROLLOUT: u64 = 4;
    pub const LEARNER: u64 = 5;
    pub const WALK: u64 = 6;
    pub const NOISE: u64 = 7;
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Child seed of `seed` along `path`.
pub fn split_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter().fold(mix(seed), |acc, &p| mix(acc ^ mix(p.wrapping_add(1))))
}

pub fn rng_for(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(split_seed(seed, path))
}
