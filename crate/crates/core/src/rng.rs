//! Seed-deterministic randomness for sharing and protocol runs.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::field::{Fe, Field};

/// Identifier recorded next to the seed in every output.
pub const RNG_ALGORITHM: &str = "chacha20";

pub struct SeededRng {
    inner: ChaCha20Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            inner: ChaCha20Rng::seed_from_u64(seed),
        }
    }

    pub fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    /// Uniform integer in `[0, n)`.
    pub fn below(&mut self, n: u32) -> u32 {
        self.inner.random_range(0..n)
    }

    pub fn element(&mut self, f: &Field) -> Fe {
        Fe(self.below(f.order()))
    }

    pub fn elements(&mut self, f: &Field, n: usize) -> Vec<Fe> {
        (0..n).map(|_| self.element(f)).collect()
    }
}
