//! Seed derivation for reproducible, schedule-independent random streams.
//!
//! Every random draw in the crate comes from a [`ChaCha8Rng`] seeded with a
//! 64-bit value. Child seeds are derived from a parent seed and a label with
//! a SplitMix64 finalizer, so replication `r` of cell `c` always sees the
//! same stream no matter which worker runs it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream labels used when splitting a replication seed.
pub mod label {
    pub const PATH: u64 = 0;
    pub const TIMES_1: u64 = 1;
    pub const TIMES_2: u64 = 2;
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derive a child seed from `parent` and `label`.
pub fn derive_seed(parent: u64, label: u64) -> u64 {
    splitmix64(splitmix64(parent) ^ label.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Derive a seed from a path of labels, e.g. `[cell, replication]`.
pub fn derive_path(parent: u64, labels: &[u64]) -> u64 {
    labels.iter().fold(parent, |s, &l| derive_seed(s, l))
}

pub fn stream(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
