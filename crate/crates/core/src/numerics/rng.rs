//! Seeded, indexable random number streams and the variate generators the
//! rest of the crate builds on.
//!
//! Every random quantity in this crate is drawn from an [`RngStream`], a
//! counter-based generator addressed by `(master_seed, stream_index)`. Two
//! streams with different indices are statistically independent, and a
//! stream's output depends only on its address and the sequence of draws
//! made from it. That is what makes parallel runs reproducible: work item
//! `i` always reads stream `i`, no matter which thread executes it.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Open01, StandardNormal};

use crate::error::{Error, Result};

/// How many times a beta draw may be retried when both gamma components
/// underflow to zero before we give up and report the failure.
const BETA_RETRY_LIMIT: u32 = 64;

/// One independent random stream, addressed by a master seed and a stream
/// index.
#[derive(Clone, Debug)]
pub struct RngStream {
    master_seed: u64,
    stream_index: u64,
    rng: ChaCha12Rng,
}

impl RngStream {
    /// Open the substream `index` of the generator family seeded by
    /// `master_seed`. Restarting from the same pair replays the identical
    /// sequence of draws.
    pub fn substream(master_seed: u64, index: u64) -> Self {
        let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
        rng.set_stream(index);
        RngStream { master_seed, stream_index: index, rng }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Uniform draw on [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random()
    }

    /// Uniform draw on the open interval (0, 1); safe to pass to `ln`.
    pub fn open01(&mut self) -> f64 {
        Open01.sample(&mut self.rng)
    }

    /// Standard normal draw.
    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.rng)
    }

    /// Normal draw with the given mean and standard deviation.
    pub fn normal(&mut self, mean: f64, sd: f64) -> f64 {
        mean + sd * self.standard_normal()
    }

    /// Gamma draw with the given shape and scale, by the Marsaglia-Tsang
    /// squeeze method. Shapes below one are handled with the boosting
    /// identity Γ(a) = Γ(a+1) · U^{1/a}.
    ///
    /// For extremely small shapes the boost factor can underflow, so a
    /// mathematically positive variate may round to exactly 0.0; callers
    /// that cannot tolerate that must check for it.
    pub fn draw_gamma(&mut self, shape: f64, scale: f64) -> Result<f64> {
        if !(shape.is_finite() && shape > 0.0) {
            return Err(Error::InvalidParameter { what: "gamma shape", value: shape });
        }
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::InvalidParameter { what: "gamma scale", value: scale });
        }
        if shape < 1.0 {
            let boost = self.open01().powf(1.0 / shape);
            let base = self.gamma_shape_ge_one(shape + 1.0);
            return Ok(base * boost * scale);
        }
        Ok(self.gamma_shape_ge_one(shape) * scale)
    }

    fn gamma_shape_ge_one(&mut self, shape: f64) -> f64 {
        let d = shape - 1.0 / 3.0;
        let c = 1.0 / (9.0 * d).sqrt();
        loop {
            let mut x: f64;
            let mut v: f64;
            loop {
                x = self.standard_normal();
                v = 1.0 + c * x;
                if v > 0.0 {
                    break;
                }
            }
            v = v * v * v;
            let u: f64 = self.uniform();
            let x2 = x * x;
            if u < 1.0 - 0.0331 * x2 * x2 {
                return d * v;
            }
            if u > 0.0 && u.ln() < 0.5 * x2 + d * (1.0 - v + v.ln()) {
                return d * v;
            }
        }
    }

    /// Beta draw as G_a / (G_a + G_b) with unit-scale gamma variates.
    ///
    /// When both gammas underflow to zero (possible only for tiny shapes)
    /// the draw is retried a bounded number of times; persistent failure
    /// is reported rather than silently returning NaN.
    pub fn draw_beta(&mut self, a: f64, b: f64) -> Result<f64> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidParameter { what: "beta shape a", value: a });
        }
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidParameter { what: "beta shape b", value: b });
        }
        for _ in 0..BETA_RETRY_LIMIT {
            let x = self.draw_gamma(a, 1.0)?;
            let y = self.draw_gamma(b, 1.0)?;
            let sum = x + y;
            if sum > 0.0 {
                let z = x / sum;
                if z > 0.0 && z < 1.0 {
                    return Ok(z);
                }
                // One component underflowed; the ratio is degenerate.
            }
        }
        Err(Error::Underflow { what: "beta draw (both gamma components zero)" })
    }

    /// Binomial draw as a sum of Bernoulli trials. The trial counts in this
    /// crate are tiny (single-digit), so the O(trials) method is exact and
    /// fast enough.
    pub fn draw_binomial(&mut self, trials: u32, p: f64) -> Result<u32> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidParameter { what: "binomial probability", value: p });
        }
        let mut count = 0;
        for _ in 0..trials {
            if self.uniform() < p {
                count += 1;
            }
        }
        Ok(count)
    }
}

/// An affine family of stream addresses: member `i` lives at substream
/// `base + i` of `master_seed`. Used to hand out disjoint blocks of
/// streams to different parts of a computation.
#[derive(Clone, Copy, Debug)]
pub struct StreamFamily {
    master_seed: u64,
    base: u64,
}

impl StreamFamily {
    pub fn new(master_seed: u64, base: u64) -> Self {
        StreamFamily { master_seed, base }
    }

    /// Open member `i` of the family.
    pub fn stream(&self, i: u64) -> RngStream {
        RngStream::substream(self.master_seed, self.base.wrapping_add(i))
    }

    /// A family shifted by `by` addresses, for carving out sub-blocks.
    pub fn offset(&self, by: u64) -> Self {
        StreamFamily { master_seed: self.master_seed, base: self.base.wrapping_add(by) }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn base(&self) -> u64 {
        self.base
    }
}
