//! Counter-based randomness.
//!
//! Every random bit used by the solvers and experiments is a pure function
//! of a key path (seed, round, retry, trial, ...) and a counter (usually a
//! vertex id). Evaluation order and thread count therefore never change an
//! outcome.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CounterRng {
    key: u64,
}

impl CounterRng {
    pub fn new(seed: u64) -> Self {
        CounterRng { key: splitmix64(seed ^ 0x6A09_E667_F3BC_C908) }
    }

    /// Independent child stream labelled by `tag`.
    pub fn derive(self, tag: u64) -> Self {
        CounterRng { key: splitmix64(self.key.rotate_left(17) ^ splitmix64(tag)) }
    }

    #[inline]
    pub fn bits(self, counter: u64) -> u64 {
        splitmix64(self.key ^ splitmix64(counter.wrapping_mul(GOLDEN) ^ 0x3C6E_F372_FE94_F82B))
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn uniform(self, counter: u64) -> f64 {
        (self.bits(counter) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Bernoulli(p); `p >= 1` is always true and `p <= 0` always false.
    #[inline]
    pub fn bernoulli(self, counter: u64, p: f64) -> bool {
        self.uniform(counter) < p
    }

    /// Sequential generator for code that needs a stream rather than
    /// random access (instance generators, shuffles).
    pub fn seeded(self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.key)
    }
}
