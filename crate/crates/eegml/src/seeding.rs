//! Deterministic derivation of per-purpose RNG seeds from one master seed.
//!
//! Every randomized step in the crate (fold shuffles, bootstrap resampling,
//! weight initialization) draws from its own stream so that adding or
//! removing one consumer never shifts the randomness seen by another.

/// Finalization step of splitmix64. Bijective on u64, so distinct
/// (master, stream) pairs cannot collide for a fixed master.
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derives the seed for a named stream from the master seed.
pub(crate) fn derive_seed(master: u64, stream: u64) -> u64 {
    mix(master.wrapping_add(0x9e3779b97f4a7c15).wrapping_add(mix(stream)))
}

/// Stream ids, namespaced so different subsystems never overlap.
pub(crate) mod streams {
    /// Per-class shuffle before round-robin fold assignment: CLASS_SHUFFLE + class index.
    pub const CLASS_SHUFFLE: u64 = 1;
    /// Per-fold learner training (weight init and the like): FOLD_TRAIN + fold index.
    pub const FOLD_TRAIN: u64 = 10_001;
    /// Per-column binary learner inside a code matrix: ECOC_COLUMN + column index.
    pub const ECOC_COLUMN: u64 = 20_001;
}
