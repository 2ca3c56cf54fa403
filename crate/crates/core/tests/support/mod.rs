//! Test-side numerical oracles.
//!
//! Everything here is implemented with different algorithms than the
//! crate under test (Lanczos instead of a Stirling series, continued
//! fractions for the distribution functions), so agreement between the
//! two is evidence, not circularity. Each integration suite compiles
//! its own copy and uses a subset.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Log-gamma by the Lanczos approximation (g = 7, nine coefficients),
/// with the reflection formula below 0.5. Accurate to ~1e-13 relative.
pub fn ln_gamma(x: f64) -> f64 {
    // Full published digits, even where f64 rounds them.
    #[allow(clippy::excessive_precision)]
    const COEFFS: [f64; 9] = [
        0.999_999_999_999_809_93,
        676.520_368_121_885_1,
        -1_259.139_216_722_402_8,
        771.323_428_777_653_13,
        -176.615_029_162_140_59,
        12.507_343_278_686_905,
        -0.138_571_095_265_720_12,
        9.984_369_578_019_571_6e-6,
        1.505_632_735_149_311_6e-7,
    ];
    if x < 0.5 {
        PI.ln() - (PI * x).sin().abs().ln() - ln_gamma(1.0 - x)
    } else {
        let z = x - 1.0;
        let t = z + 7.5;
        let mut a = COEFFS[0];
        for (i, &c) in COEFFS.iter().enumerate().skip(1) {
            a += c / (z + i as f64);
        }
        0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + a.ln()
    }
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Regularized incomplete beta I_x(a, b) via the modified Lentz
/// continued fraction, switching tails for convergence.
pub fn beta_cdf(a: f64, b: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let front = (a * x.ln() + b * (1.0 - x).ln() - ln_beta(a, b)).exp();
    if x < (a + 1.0) / (a + b + 2.0) {
        front * beta_continued_fraction(a, b, x) / a
    } else {
        // Reflected tail, evaluated directly (recursing would not
        // terminate exactly at the switch point).
        1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b
    }
}

fn beta_continued_fraction(a: f64, b: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..400 {
        let m = m as f64;
        let m2 = 2.0 * m;
        let numerator = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + numerator * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + numerator / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let numerator = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + numerator * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + numerator / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-14 {
            break;
        }
    }
    h
}

/// Regularized lower incomplete gamma P(s, x): series on the left of
/// the mean, continued fraction on the right.
pub fn gamma_cdf(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x < s + 1.0 {
        let mut term = 1.0 / s;
        let mut sum = term;
        let mut denom = s;
        for _ in 0..700 {
            denom += 1.0;
            term *= x / denom;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                break;
            }
        }
        (sum.ln() + s * x.ln() - x - ln_gamma(s)).exp()
    } else {
        1.0 - upper_gamma_continued_fraction(s, x)
    }
}

fn upper_gamma_continued_fraction(s: f64, x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0 - s;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..700 {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-14 {
            break;
        }
    }
    (s * x.ln() - x - ln_gamma(s)).exp() * h
}

/// Survival function of the chi-square distribution.
pub fn chi_square_sf(stat: f64, dof: f64) -> f64 {
    (1.0 - gamma_cdf(dof / 2.0, stat / 2.0)).clamp(0.0, 1.0)
}

/// p-quantile of a gamma(shape, scale) law by bisection on the CDF.
pub fn gamma_quantile(shape: f64, scale: f64, p: f64) -> f64 {
    assert!((0.0..1.0).contains(&p));
    if p == 0.0 {
        return 0.0;
    }
    let mut lo = 0.0;
    let mut hi = scale * (shape + 10.0 * shape.sqrt() + 10.0);
    while gamma_cdf(shape, hi / scale) < p {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gamma_cdf(shape, mid / scale) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Two-sided Kolmogorov-Smirnov statistic against a continuous CDF.
/// Sorts the sample in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
    }
    d
}

/// Asymptotic Kolmogorov p-value with the Stephens finite-sample
/// adjustment; good to a few percent for n >= 100, plenty for
/// pass/fail at the 1% level.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sqrt_n = (n as f64).sqrt();
    let t = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
    let mut p = 0.0;
    for k in 1..=100 {
        let term = 2.0 * (-2.0 * (k * k) as f64 * t * t).exp();
        p += if k % 2 == 1 { term } else { -term };
    }
    p.clamp(0.0, 1.0)
}

pub fn binomial_coefficient(n: u64, k: u64) -> f64 {
    (ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)).exp()
}

pub fn binomial_pmf(k: u64, n: u64, p: f64) -> f64 {
    binomial_coefficient(n, k) * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32)
}

/// Beta-binomial pmf: binomial counts with a beta-mixed success
/// probability.
pub fn beta_binomial_pmf(k: u64, n: u64, a: f64, b: f64) -> f64 {
    binomial_coefficient(n, k) * (ln_beta(k as f64 + a, (n - k) as f64 + b) - ln_beta(a, b)).exp()
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

pub fn sample_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (values.len() as f64 - 1.0)
}

/// Standard error of the sample mean.
pub fn se_of_mean(values: &[f64]) -> f64 {
    (sample_variance(values) / values.len() as f64).sqrt()
}

/// Asymptotic standard error of the sample variance,
/// sqrt((m4 - var^2) / n) with m4 the central fourth moment.
pub fn se_of_variance(values: &[f64]) -> f64 {
    let m = mean(values);
    let n = values.len() as f64;
    let var = sample_variance(values);
    let m4 = values.iter().map(|v| (v - m).powi(4)).sum::<f64>() / n;
    ((m4 - var * var) / n).sqrt()
}

/// Pearson chi-square goodness-of-fit statistic for observed counts
/// against cell probabilities; returns (statistic, degrees of freedom).
pub fn chi_square_gof(observed: &[u64], probabilities: &[f64]) -> (f64, f64) {
    assert_eq!(observed.len(), probabilities.len());
    let total: u64 = observed.iter().sum();
    let mut stat = 0.0;
    for (&o, &p) in observed.iter().zip(probabilities) {
        let expected = total as f64 * p;
        assert!(expected > 0.0, "cell with zero expectation");
        stat += (o as f64 - expected) * (o as f64 - expected) / expected;
    }
    (stat, observed.len() as f64 - 1.0)
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn oracle_reference_points() {
        assert!((ln_gamma(1.0)).abs() < 1e-12);
        assert!((ln_gamma(5.0) - 24.0f64.ln()).abs() < 1e-12);
        assert!((ln_gamma(0.5) - 0.5 * PI.ln()).abs() < 1e-12);
        // Uniform CDF and symmetric beta.
        assert!((beta_cdf(1.0, 1.0, 0.3) - 0.3).abs() < 1e-12);
        assert!((beta_cdf(2.0, 2.0, 0.5) - 0.5).abs() < 1e-12);
        // Exponential is gamma(1, 1).
        assert!((gamma_cdf(1.0, 1.0) - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
        // Chi-square(2) sf at its median.
        assert!((chi_square_sf(2.0 * 2.0f64.ln(), 2.0) - 0.5).abs() < 1e-12);
        let q = gamma_quantile(2.5, 0.52, 0.5);
        assert!((gamma_cdf(2.5, q / 0.52) - 0.5).abs() < 1e-10);
        // Binomial(4, 0.5) pmf sums to one.
        let total: f64 = (0..=4).map(|k| binomial_pmf(k, 4, 0.5)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let total: f64 = (0..=4).map(|k| beta_binomial_pmf(k, 4, 0.8592, 3.9593)).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}
