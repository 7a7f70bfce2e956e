//! Deterministic random-stream derivation.
//!
//! Every experiment consumes randomness through named sub-streams derived
//! from a single master seed. Sub-streams with distinct labels or indices
//! are statistically independent, and the derivation is stable across runs
//! and across worker counts, so any parallel partition of work reproduces
//! the sequential result.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Handle for a derivable stream of randomness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    key: [u64; 4],
}

impl RngStream {
    /// Root stream for a master seed.
    pub fn from_seed(seed: u64) -> Self {
        RngStream {
            key: [mix(seed, 0x9e37_79b9_7f4a_7c15), mix(seed, 0xbf58_476d_1ce4_e5b9), 0, 0],
        }
    }

    /// Derive an independent child stream named by `label` and `index`.
    pub fn derive(&self, label: &str, index: u64) -> Self {
        let mut h = fnv1a(label.as_bytes());
        h = mix(h, index);
        let key = [
            mix(self.key[0], h),
            mix(self.key[1], h.rotate_left(17)),
            mix(self.key[2] ^ index, h.rotate_left(31)),
            mix(self.key[3].wrapping_add(index), h.rotate_left(47)),
        ];
        RngStream { key }
    }

    /// Instantiate the generator for this stream.
    pub fn rng(&self) -> ChaCha12Rng {
        let mut seed = [0u8; 32];
        for (chunk, word) in seed.chunks_exact_mut(8).zip(self.key.iter()) {
            chunk.copy_from_slice(&word.to_le_bytes());
        }
        ChaCha12Rng::from_seed(seed)
    }
}

/// Derive a child master seed for an independent sub-experiment.
pub fn derive_seed(master: u64, label: &str, index: u64) -> u64 {
    mix(mix(master, fnv1a(label.as_bytes())), index.wrapping_add(0x517c_c1b7_2722_0a95))
}

// splitmix64 finalizer; good avalanche for key derivation.
fn mix(a: u64, b: u64) -> u64 {
    let mut z = a ^ b.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
