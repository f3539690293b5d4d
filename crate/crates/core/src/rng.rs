//! Seeded random streams.
//!
//! Every random draw in the simulator comes from ChaCha8 (`rand_chacha`),
//! keyed by a 64-bit seed through `SeedableRng::seed_from_u64` and split into
//! independent streams with `set_stream`. ChaCha8 output is fixed by its
//! published algorithm, and the sampling helpers below are written out here
//! rather than borrowed from a distribution crate so that the mapping from
//! raw words to values is pinned as well:
//!
//! * `unit_open_closed`: `((w >> 11) + 1) * 2^-53`, in `(0, 1]`.
//! * `unit_closed_open`: `(w >> 11) * 2^-53`, in `[0, 1)`.
//! * `index_below(n)`: rejection sampling on `w` against the largest
//!   multiple of `n` that fits in `u64`, then `w % n`.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Stream labels. A run derives one generator per label from its seed, so
/// adding a consumer on one stream never perturbs the draws of another.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    Mobility = 0,
    Leader = 1,
    Coverage = 2,
}

#[derive(Debug, Clone)]
pub struct SimRng {
    inner: ChaCha8Rng,
}

const TWO_POW_NEG_53: f64 = 1.0 / (1u64 << 53) as f64;

impl SimRng {
    pub fn new(seed: u64, stream: Stream) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream as u64);
        SimRng { inner }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform in `[0, 1)`.
    #[inline]
    pub fn unit_closed_open(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_NEG_53
    }

    /// Uniform in `(0, 1]`.
    #[inline]
    pub fn unit_open_closed(&mut self) -> f64 {
        ((self.next_u64() >> 11) + 1) as f64 * TWO_POW_NEG_53
    }

    /// Uniform integer in `0..n`. Panics if `n == 0`.
    pub fn index_below(&mut self, n: usize) -> usize {
        assert!(n > 0, "index_below(0)");
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let w = self.next_u64();
            if w < zone {
                return (w % n) as usize;
            }
        }
    }

    /// Fisher-Yates, last index first.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.index_below(i + 1);
            items.swap(i, j);
        }
    }
}

/// SplitMix64 finalizer; used to combine seeds with identifying values.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Folds a sequence of words into a seed.
pub fn derive_seed(base: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(base), |acc, &p| mix64(acc ^ p))
}
