//! Counter-based splittable random streams.
//!
//! Monte Carlo batches key an independent stream to each `(seed,
//! sample_index)` pair, so results do not depend on how samples are
//! distributed across workers. The generator is the splitmix64 sequence:
//! a Weyl counter passed through a 64-bit finalizer. Statistical quality
//! is ample for sampling; this is not a cryptographic generator.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A deterministic stream of pseudo-random numbers.
#[derive(Debug, Clone)]
pub struct CounterRng {
    state: u64,
}

impl CounterRng {
    /// Stream for a bare seed (substream index 0).
    pub fn new(seed: u64) -> Self {
        Self::substream(seed, 0)
    }

    /// Independent stream keyed by `(seed, index)`.
    pub fn substream(seed: u64, index: u64) -> Self {
        let key = mix64(seed ^ mix64(index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(1)));
        CounterRng { state: key }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9_007_199_254_740_992.0)
    }

    /// Uniform draw in the open interval `(0, 1)`; both endpoints are
    /// excluded, which matters when the draw feeds `ln` or `powf`.
    #[inline]
    pub fn next_f64_open(&mut self) -> f64 {
        ((self.next_u64() >> 12) as f64 + 0.5) * (1.0 / 4_503_599_627_370_496.0)
    }
}
