//! Deterministic per-element random streams.
//!
//! Every sketch derives the pseudo-random values of an element from a
//! [`RandomStream`] seeded with the element itself, so the same element
//! always produces the same register updates. The generator is WyRand
//! (64-bit state); the seed is passed through the SplitMix64 finalizer first
//! so that small or structured element values still start from well-mixed
//! states. Changing either function changes every serialized sketch.

use crate::error::{invalid, Result, SketchError};

const WY_INCREMENT: u64 = 0xa076_1d64_78bd_642f;
const WY_XOR: u64 = 0xe703_7ed1_a0b4_28db;
const TWO_POW_MINUS_53: f64 = 1.0 / (1u64 << 53) as f64;

/// SplitMix64 finalizer. Also used to derive independent per-trial seeds.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for the `index`-th independent sub-stream of `seed`.
#[inline]
pub fn split_seed(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(mix64(index)))
}

/// WyRand stream seeded by a 64-bit element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomStream {
    state: u64,
}

impl RandomStream {
    #[inline]
    pub fn from_seed(seed: u64) -> Self {
        Self { state: mix64(seed) }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(WY_INCREMENT);
        let t = u128::from(self.state) * u128::from(self.state ^ WY_XOR);
        ((t >> 64) as u64) ^ (t as u64)
    }

    /// Uniform on `[0, 1)` with 53 bits of resolution.
    #[inline]
    pub fn next_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * TWO_POW_MINUS_53
    }

    /// Uniform on the open interval `(0, 1)`.
    #[inline]
    pub fn next_open_uniform(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * TWO_POW_MINUS_53
    }

    /// Standard exponential draw (rate 1) by inversion.
    #[inline]
    pub fn next_standard_exponential(&mut self) -> f64 {
        // 1 - u lies in (0, 1], so the logarithm is finite.
        -(-self.next_uniform()).ln_1p()
    }

    pub fn next_exponential(&mut self, rate: f64) -> Result<f64> {
        if !(rate > 0.0 && rate.is_finite()) {
            return invalid(format!(
                "exponential rate must be positive and finite, got {rate}"
            ));
        }
        Ok(self.next_standard_exponential() / rate)
    }

    /// Exponential(`rate`) conditioned on `[lo, hi)`; `hi` may be infinite.
    pub fn next_truncated_exponential(&mut self, rate: f64, lo: f64, hi: f64) -> Result<f64> {
        if !(rate > 0.0 && rate.is_finite()) {
            return invalid(format!(
                "exponential rate must be positive and finite, got {rate}"
            ));
        }
        if !(lo >= 0.0 && lo.is_finite() && hi > lo) {
            return invalid(format!("invalid truncation interval [{lo}, {hi})"));
        }
        let mass = -(-rate * (hi - lo)).exp_m1();
        Ok(truncated_exponential_from_uniform(
            self.next_uniform(),
            rate,
            lo,
            hi,
            mass,
        ))
    }

    /// Uniform integer in `[0, n)` using Lemire's multiply-and-reject method.
    #[inline]
    pub fn next_below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        let mut product = u128::from(self.next_u64()) * u128::from(n);
        let mut low = product as u64;
        if low < n {
            let threshold = n.wrapping_neg() % n;
            while low < threshold {
                product = u128::from(self.next_u64()) * u128::from(n);
                low = product as u64;
            }
        }
        (product >> 64) as u64
    }
}

/// Inverse-CDF of the exponential distribution truncated to `[lo, hi)`.
///
/// `mass` is `1 - exp(-rate * (hi - lo))`, the probability of the interval
/// relative to its left end. `u` must be uniform on `[0, 1)`.
#[inline]
pub(crate) fn truncated_exponential_from_uniform(
    u: f64,
    rate: f64,
    lo: f64,
    hi: f64,
    mass: f64,
) -> f64 {
    let x = lo - (-u * mass).ln_1p() / rate;
    if x < hi {
        x
    } else {
        hi.next_down()
    }
}

/// Incremental Fisher-Yates shuffle of `{0, .., m-1}`.
///
/// Each draw returns a not-yet-returned index chosen uniformly among the
/// remaining ones. [`reset`](Self::reset) is O(1): swapped slots are tagged
/// with a generation number and untagged slots read as the identity.
#[derive(Debug, Clone)]
pub struct PermutationSampler {
    values: Vec<u32>,
    generations: Vec<u32>,
    generation: u32,
    drawn: usize,
}

impl PermutationSampler {
    pub fn new(m: usize) -> Result<Self> {
        if m == 0 || m > u32::MAX as usize {
            return invalid(format!("sampler size must be in [1, 2^32), got {m}"));
        }
        Ok(Self {
            values: vec![0; m],
            generations: vec![0; m],
            generation: 1,
            drawn: 0,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn drawn(&self) -> usize {
        self.drawn
    }

    #[inline]
    pub fn reset(&mut self) {
        self.drawn = 0;
        self.generation = self.generation.wrapping_add(1);
        if self.generation == 0 {
            self.generations.fill(0);
            self.generation = 1;
        }
    }

    /// Next index of the permutation, or an error once all `m` are drawn.
    pub fn next_index(&mut self, stream: &mut RandomStream) -> Result<usize> {
        if self.drawn >= self.values.len() {
            return Err(SketchError::SamplerExhausted(self.values.len()));
        }
        Ok(self.draw(stream))
    }

    #[inline]
    pub(crate) fn draw(&mut self, stream: &mut RandomStream) -> usize {
        let m = self.values.len();
        let j = self.drawn;
        debug_assert!(j < m);
        let r = j + stream.next_below((m - j) as u64) as usize;
        let picked = self.slot(r);
        let displaced = self.slot(j);
        self.values[r] = displaced;
        self.generations[r] = self.generation;
        self.drawn += 1;
        picked as usize
    }

    #[inline]
    fn slot(&self, i: usize) -> u32 {
        if self.generations[i] == self.generation {
            self.values[i]
        } else {
            i as u32
        }
    }
}
