//! Deterministic seeding.
//!
//! Every random draw in the toolkit comes from a [`ChaCha8Rng`] whose seed is
//! derived from the run seed plus a purpose tag and an index. Substreams never
//! share state, so the order in which realizations or links are processed does
//! not change any output.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// SplitMix64 finalizer.
pub fn mix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Folds a sequence of words into one seed. Stable across platforms and
/// compiler versions, unlike `std::hash`.
pub fn derive_seed(parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(0x6A09_E667_F3BC_C908, |acc, &p| mix64(acc ^ mix64(p)))
}

/// Purpose tags for substreams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    AccessPoints = 1,
    Hotspots = 2,
    KMeans = 3,
    Backhaul = 4,
    Channel = 5,
    Heuristic = 6,
}

pub fn substream(seed: u64, stream: Stream, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(&[seed, stream as u64, index]))
}
