//! Seeds and deterministic substreams.
//!
//! The generator is SplitMix64 (a counter-based scheme: the state advances by
//! the golden-ratio increment `0x9E3779B97F4A7C15` and each output is the
//! state passed through the Stafford variant-13 finalizer). Substream seeds
//! are derived by hashing `(master seed, purpose tag, index)`; the tag is
//! folded with 64-bit FNV-1a (offset `0xCBF29CE484222325`, prime
//! `0x100000001B3`). The whole scheme uses integer arithmetic only, so
//! corpora are identical across platforms.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub type Seed = u64;

pub type Stream = SplitMix64;

const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(FNV_OFFSET, |h, b| (h ^ *b as u64).wrapping_mul(FNV_PRIME))
}

/// One SplitMix64 output for the given state.
pub fn mix64(x: u64) -> u64 {
    SplitMix64::seed_from_u64(x).next_u64()
}

/// Seed of the substream `(master, tag, index)`.
pub fn derive_seed(master: Seed, tag: &str, index: u64) -> Seed {
    let h = mix64(master ^ fnv1a(tag.as_bytes()));
    mix64(h ^ mix64(index))
}

pub fn stream(seed: Seed) -> Stream {
    SplitMix64::seed_from_u64(seed)
}

pub fn substream(master: Seed, tag: &str, index: u64) -> Stream {
    stream(derive_seed(master, tag, index))
}

/// Maps 64 random bits onto `[0, 1)` using the top 53 bits.
pub fn unit_interval(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
