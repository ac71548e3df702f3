//! Seeded, splittable pseudo-random stream.
//!
//! The generator is SplitMix64 (64-bit state, Steele/Lea/Flood). Substreams are
//! derived by hashing a label with FNV-1a and mixing it into the parent seed
//! through the SplitMix64 finalizer, so `derive("lp")` always yields the same
//! stream for a given master seed on every platform.

use rand::RngCore;
use rand::SeedableRng;
use rand_xoshiro::SplitMix64;

#[derive(Clone, Debug)]
pub struct PrngStream {
    seed: u64,
    inner: SplitMix64,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

impl PrngStream {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            inner: SplitMix64::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream for `label`; does not advance `self`.
    pub fn derive(&self, label: &str) -> PrngStream {
        PrngStream::new(derive_seed(self.seed, label))
    }

    /// Child stream for `label` and an index (e.g. epoch or target number).
    pub fn derive_indexed(&self, label: &str, index: u64) -> PrngStream {
        PrngStream::new(mix(derive_seed(self.seed, label) ^ mix(index)))
    }
}

/// Seed of the substream `label` under `seed`.
pub fn derive_seed(seed: u64, label: &str) -> u64 {
    mix(seed ^ fnv1a(label.as_bytes()))
}

impl RngCore for PrngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}
