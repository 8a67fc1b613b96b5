//! Deterministic seed derivation.
//!
//! Every randomized routine takes an explicit seed and derives per-task
//! sub-seeds through a fixed splitmix64 chain, so results are reproducible
//! bit-for-bit regardless of thread count or evaluation order.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One splitmix64 step: mixes `x` into a new 64-bit value.
///
/// Constants are the standard ones from Steele, Lea and Flood's generator;
/// the map is bijective, so distinct inputs never collide.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a sub-seed from a master seed and a path of labels
/// (study, scenario, replicate, ...). The fold is order-sensitive.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = splitmix64(master);
    for &label in path {
        state = splitmix64(state ^ splitmix64(label.wrapping_add(0xA076_1D64_78BD_642F)));
    }
    state
}

/// A ChaCha stream seeded from `derive_seed(master, path)`.
pub fn rng_for(master: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(master, path))
}
