//! Scalar special functions and reproducible random variate generation.
//!
//! The special functions are implemented to double precision with the
//! classic scheme: shift the argument above a threshold by the recurrence
//! relations, then evaluate the Stirling-type asymptotic series. No
//! arbitrary-precision arithmetic is attempted; accuracy contracts are
//! enforced by the unit tests against independently computed values.

mod rng;

pub use rng::{RngStream, StreamFamily};

use crate::error::{Error, Result};

/// Arguments at or above this value go straight to the asymptotic series;
/// smaller ones are shifted up by recurrence first.
const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

// Written with the full published digits even where f64 rounds them.
#[allow(clippy::excessive_precision)]
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

/// Stirling series coefficients: B_{2k} / (2k (2k-1)) for k = 1..8.
const LOG_GAMMA_SERIES: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
];

/// Asymptotic coefficients of psi(x) ~ ln x - 1/(2x) - sum B_{2k}/(2k x^{2k}).
const DIGAMMA_SERIES: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32_760.0,
    1.0 / 12.0,
];

/// Asymptotic coefficients of psi'(x) ~ 1/x + 1/(2x^2) + sum B_{2k}/x^{2k+1}.
const TRIGAMMA_SERIES: [f64; 8] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
];

fn require_positive(what: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what, value: x })
    }
}

/// Natural log of the gamma function, ln Γ(x), for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    require_positive("log_gamma", x)?;
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_THRESHOLD {
        shift -= z.ln();
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    let mut series = LOG_GAMMA_SERIES[7];
    for k in (0..7).rev() {
        series = series * w + LOG_GAMMA_SERIES[k];
    }
    Ok(shift + (z - 0.5) * z.ln() - z + LN_SQRT_2PI + series / z)
}

/// Digamma function ψ(x) = d/dx ln Γ(x), for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    require_positive("digamma", x)?;
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_THRESHOLD {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    let mut series = DIGAMMA_SERIES[6];
    for k in (0..6).rev() {
        series = series * w + DIGAMMA_SERIES[k];
    }
    Ok(shift + z.ln() - 0.5 / z - series * w)
}

/// Trigamma function ψ′(x), for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    require_positive("trigamma", x)?;
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_THRESHOLD {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    let w = 1.0 / (z * z);
    let mut series = TRIGAMMA_SERIES[7];
    for k in (0..7).rev() {
        series = series * w + TRIGAMMA_SERIES[k];
    }
    Ok(shift + 1.0 / z + 0.5 * w + series * w / z)
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a+b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    Ok(log_gamma(a)? + log_gamma(b)? - log_gamma(a + b)?)
}

/// Pearson correlation of a pair sample; `None` when fewer than two pairs
/// or either coordinate has zero variance. Result is clamped to [-1, 1]
/// against rounding spill.
pub(crate) fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    let n = pairs.len();
    if n < 2 {
        return None;
    }
    let inv_n = 1.0 / n as f64;
    let (mut mx, mut my) = (0.0, 0.0);
    for &(x, y) in pairs {
        mx += x;
        my += y;
    }
    mx *= inv_n;
    my *= inv_n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        let dx = x - mx;
        let dy = y - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}
