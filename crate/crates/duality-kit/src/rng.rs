//! Seed derivation and sampling primitives.
//!
//! Every stochastic operation in the crate draws from a ChaCha8 stream whose
//! seed is derived from a master seed through a fixed 64-bit mixing chain
//! (splittable-stream contract). Replicas, Poisson arrow streams per
//! `(i, j, k)`, and the reserved type stream all get disjoint tags, so results
//! are bit-for-bit reproducible under any parallel schedule.
//!
//! Floating-point sampling (uniform, exponential, normal) is implemented here
//! directly on top of the raw 64-bit output so that the sampled values do not
//! depend on distribution-crate internals.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Stream tags. Each stochastic role mixes a distinct tag into the seed chain.
pub mod tag {
    pub const REPLICA: u64 = 0x5245_504c_4943_4100; // "REPLICA"
    pub const ARROW: u64 = 0x4152_524f_5700_0000; // "ARROW"
    pub const TYPE_STREAM: u64 = 0x5459_5045_0000_0000; // reserved for randomized mechanisms
    pub const INITIAL_SET: u64 = 0x494e_4954_0000_0000;
    pub const WALK: u64 = 0x5741_4c4b_0000_0000;
    pub const JUMP_CHAIN: u64 = 0x4a55_4d50_0000_0000;
    pub const SDE: u64 = 0x5344_4500_0000_0000;
}

/// SplitMix64 step, the fixed 64-bit mixing function of the seed chain.
#[inline]
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a stream seed by absorbing a sequence of words into the master seed.
pub fn mix(master: u64, words: &[u64]) -> u64 {
    let mut s = splitmix64(master);
    for &w in words {
        s = splitmix64(s ^ w);
    }
    s
}

/// A deterministic sampling stream.
pub struct Stream {
    rng: ChaCha8Rng,
}

impl Stream {
    pub fn from_seed(seed: u64) -> Self {
        let mut key = [0u8; 32];
        let mut s = seed;
        for chunk in key.chunks_mut(8) {
            s = splitmix64(s);
            chunk.copy_from_slice(&s.to_le_bytes());
        }
        Stream {
            rng: ChaCha8Rng::from_seed(key),
        }
    }

    pub fn for_role(master: u64, role: u64, indices: &[u64]) -> Self {
        let mut words = Vec::with_capacity(indices.len() + 1);
        words.push(role);
        words.extend_from_slice(indices);
        Stream::from_seed(mix(master, &words))
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform in the open interval (0, 1).
    #[inline]
    pub fn uniform_open(&mut self) -> f64 {
        loop {
            let u = (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0);
            if u > 0.0 {
                return u;
            }
        }
    }

    /// Uniform in the half-open interval [0, 1).
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Exponential with the given rate, by inversion.
    #[inline]
    pub fn exponential(&mut self, rate: f64) -> f64 {
        debug_assert!(rate > 0.0);
        -self.uniform_open().ln() / rate
    }

    /// Standard normal via Box-Muller. One value per call; the twin is
    /// discarded to keep the draw count predictable.
    #[inline]
    pub fn normal(&mut self) -> f64 {
        let u1 = self.uniform_open();
        let u2 = self.uniform();
        (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    /// Uniform integer in `[0, n)`.
    #[inline]
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        // Rejection to avoid modulo bias.
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let v = self.rng.next_u64();
            if v < zone {
                return v % n;
            }
        }
    }

    /// Fair coin as +1 / -1.
    #[inline]
    pub fn sign(&mut self) -> i64 {
        if self.rng.next_u64() & 1 == 0 {
            1
        } else {
            -1
        }
    }

    /// Bernoulli(p).
    #[inline]
    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.uniform() < p
    }

    /// A uniformly random subset of `{0, .., n-1}` of the given size, as a
    /// sorted index list (partial Fisher-Yates).
    pub fn subset(&mut self, n: usize, size: usize) -> Vec<usize> {
        assert!(size <= n);
        let mut idx: Vec<usize> = (0..n).collect();
        for i in 0..size {
            let j = i + self.below((n - i) as u64) as usize;
            idx.swap(i, j);
        }
        let mut out = idx[..size].to_vec();
        out.sort_unstable();
        out
    }
}
