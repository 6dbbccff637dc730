//! Seeded α samples.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood 2014). Each draw takes the
//! top 53 bits of the next output: `α = (x >> 11) · 2⁻⁵³ ∈ [0, 1)`. Keeping this
//! fixed is what lets fixtures be reproduced from a seed alone.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

pub struct AlphaSampler(SplitMix64);

impl AlphaSampler {
    pub fn new(seed: u64) -> Self {
        AlphaSampler(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn next_alpha(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform integer in `0..bound` by rejection.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let zone = u64::MAX - u64::MAX % bound;
        loop {
            let x = self.0.next_u64();
            if x < zone {
                return x % bound;
            }
        }
    }
}

pub fn random_alphas(seed: u64, count: usize) -> Vec<f64> {
    let mut s = AlphaSampler::new(seed);
    (0..count).map(|_| s.next_alpha()).collect()
}

/// `j / points` for `0 <= j < points`.
pub fn uniform_grid(points: usize) -> Vec<f64> {
    (0..points).map(|j| j as f64 / points as f64).collect()
}
