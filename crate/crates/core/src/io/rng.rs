//! Seeded random numbers for the generators and ensembles.
//!
//! The stream is ChaCha8 (via `rand_chacha`), seeded through
//! `SeedableRng::seed_from_u64`. Both are specified algorithms, so a given
//! seed yields the same numbers on every platform. Floats take the top 53
//! bits of a `u64` draw, giving a uniform value in `[0, 1)`.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(ChaCha8Rng::seed_from_u64(seed))
    }

    /// An independent stream for member `index` of an ensemble.
    pub fn stream(seed: u64, index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(index);
        Self(inner)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `lo..=hi`.
    pub fn range_inclusive(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        let span = (hi - lo + 1) as u64;
        // rejection keeps the draw unbiased
        let zone = u64::MAX - u64::MAX % span;
        loop {
            let x = self.0.next_u64();
            if x < zone {
                return lo + (x % span) as usize;
            }
        }
    }
}
