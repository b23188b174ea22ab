//! Seed handling. Every stochastic operation takes an explicit `u64` seed and
//! builds its own ChaCha stream from it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// FNV-1a, used to turn an operation tag into a stable seed offset.
pub fn tag_hash(tag: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

/// Seed for a named sub-operation: `seed + hash(tag)`.
pub fn derive_seed(seed: u64, tag: &str) -> u64 {
    seed.wrapping_add(tag_hash(tag))
}
