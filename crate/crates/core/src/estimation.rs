//! Frequentist estimators: beta maximum likelihood for the marginals,
//! beta-binomial maximum likelihood for count histograms, and the
//! moment-closure ("modified maximum likelihood") estimator of the
//! five-parameter bivariate beta family.
//!
//! The modified estimator combines the two marginal beta MLEs with one
//! moment equation: the sample mean of `(1-z1)(1-z2)/(z1 z2)` is matched
//! to its closed form, which reduces to a monic quadratic in the shared
//! component `alpha_5`. The larger root, floored at zero, then determines
//! the remaining components by successive subtraction, each also floored
//! at zero.

use crate::error::{Error, Result};
use crate::model::BivariateDataset;
use crate::numerics::{digamma, log_beta, trigamma};
use crate::summaries::legacy_moment_stat;

const MAX_NEWTON_ITERATIONS: usize = 100;

/// Marginal beta shape MLEs: `(a_hat, b_hat)` for the first coordinate
/// and `(c_hat, d_hat)` for the second.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MarginalMles {
    pub a_hat: f64,
    pub b_hat: f64,
    pub c_hat: f64,
    pub d_hat: f64,
}

impl MarginalMles {
    pub fn new(a_hat: f64, b_hat: f64, c_hat: f64, d_hat: f64) -> Result<Self> {
        for (v, what) in [
            (a_hat, "marginal MLE a"),
            (b_hat, "marginal MLE b"),
            (c_hat, "marginal MLE c"),
            (d_hat, "marginal MLE d"),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter { what, value: v });
            }
        }
        Ok(MarginalMles { a_hat, b_hat, c_hat, d_hat })
    }
}

/// Output of the five-parameter moment-closure estimator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mmle5Result {
    /// The estimate, componentwise nonnegative.
    pub alpha_hat: [f64; 5],
    /// Linear coefficient of the monic quadratic solved for `alpha_5`.
    pub quadratic_b: f64,
    /// Constant coefficient of that quadratic.
    pub quadratic_c: f64,
    /// Which components were clipped to the zero floor. `clipped[4]` is
    /// also set when the quadratic had no real root.
    pub clipped: [bool; 5],
}

/// Per-observation beta log-likelihood up to the constant in the data.
fn beta_objective(a: f64, b: f64, mean_log: f64, mean_log1m: f64) -> f64 {
    (a - 1.0) * mean_log + (b - 1.0) * mean_log1m - log_beta(a, b).expect("positive shapes")
}

/// Maximum likelihood beta shapes given the sufficient statistics
/// `mean_log = mean log z` and `mean_log1m = mean log(1-z)`, starting the
/// Newton iteration from `init`.
///
/// The log-likelihood is strictly concave in `(a, b)`, so Newton with
/// step halving converges; the score equations
/// `psi(a) - psi(a+b) = mean_log` and `psi(b) - psi(a+b) = mean_log1m`
/// are satisfied to 1e-9 on success.
pub fn beta_mle_from_logmoments(
    mean_log: f64,
    mean_log1m: f64,
    init: (f64, f64),
) -> Result<(f64, f64)> {
    if !(mean_log < 0.0 && mean_log1m < 0.0) {
        // Means of logs of values in (0,1) are strictly negative.
        return Err(Error::Domain { what: "mean log statistic", value: mean_log.max(mean_log1m) });
    }
    let (mut a, mut b) = init;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::InvalidParameter { what: "beta MLE start", value: a.min(b) });
    }
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let s = a + b;
        let psi_s = digamma(s)?;
        let ga = mean_log - digamma(a)? + psi_s;
        let gb = mean_log1m - digamma(b)? + psi_s;
        if ga.abs().max(gb.abs()) <= 1e-10 {
            return Ok((a, b));
        }
        // Newton direction: solve M d = g with M the negated Hessian,
        // M = [psi'(a)-psi'(s), -psi'(s); -psi'(s), psi'(b)-psi'(s)].
        let tri_s = trigamma(s)?;
        let m11 = trigamma(a)? - tri_s;
        let m22 = trigamma(b)? - tri_s;
        let m12 = -tri_s;
        let det = m11 * m22 - m12 * m12;
        if det <= 0.0 || !det.is_finite() {
            return Err(Error::NonConvergence {
                what: "beta MLE Newton (singular curvature)",
                iterations: MAX_NEWTON_ITERATIONS,
            });
        }
        let mut da = (ga * m22 - gb * m12) / det;
        let mut db = (gb * m11 - ga * m12) / det;
        let before = beta_objective(a, b, mean_log, mean_log1m);
        let mut halvings = 0;
        loop {
            let (na, nb) = (a + da, b + db);
            if na > 0.0
                && nb > 0.0
                && beta_objective(na, nb, mean_log, mean_log1m) >= before - 1e-12
            {
                a = na;
                b = nb;
                break;
            }
            da *= 0.5;
            db *= 0.5;
            halvings += 1;
            if halvings > 60 {
                return Err(Error::NonConvergence {
                    what: "beta MLE step halving",
                    iterations: MAX_NEWTON_ITERATIONS,
                });
            }
        }
    }
    Err(Error::NonConvergence { what: "beta MLE Newton", iterations: MAX_NEWTON_ITERATIONS })
}

fn moment_start(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / n;
    if var > 0.0 {
        let common = mean * (1.0 - mean) / var - 1.0;
        if common > 0.0 {
            return ((mean * common).max(1e-3), ((1.0 - mean) * common).max(1e-3));
        }
    }
    (1.0, 1.0)
}

/// Maximum likelihood beta shapes for values in the open unit interval.
/// Needs at least two observations with variation.
pub fn beta_mle(values: &[f64]) -> Result<(f64, f64)> {
    if values.len() < 2 {
        return Err(Error::EmptySample { what: "beta MLE sample (need n >= 2)" });
    }
    for &v in values {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::Domain { what: "beta MLE observation", value: v });
        }
    }
    if values.iter().all(|&v| v == values[0]) {
        return Err(Error::Degenerate { what: "beta MLE on constant data" });
    }
    let n = values.len() as f64;
    let mean_log = values.iter().map(|&v| v.ln()).sum::<f64>() / n;
    let mean_log1m = values.iter().map(|&v| (1.0 - v).ln()).sum::<f64>() / n;
    beta_mle_from_logmoments(mean_log, mean_log1m, moment_start(values))
}

/// Marginal beta MLEs of both coordinates of a dataset.
pub fn marginal_mles(data: &BivariateDataset) -> Result<MarginalMles> {
    let z1: Vec<f64> = data.pairs().iter().map(|p| p.0).collect();
    let z2: Vec<f64> = data.pairs().iter().map(|p| p.1).collect();
    let (a_hat, b_hat) = beta_mle(&z1)?;
    let (c_hat, d_hat) = beta_mle(&z2)?;
    MarginalMles::new(a_hat, b_hat, c_hat, d_hat)
}

/// Beta-binomial log-likelihood of a count histogram, up to the additive
/// data constant (the binomial coefficients).
fn beta_binomial_objective(counts: &[u64], trials: u32, a: f64, b: f64) -> Result<f64> {
    let total: u64 = counts.iter().sum();
    let mut ll = -(total as f64) * log_beta(a, b)?;
    for (k, &nk) in counts.iter().enumerate() {
        if nk > 0 {
            ll += nk as f64 * log_beta(a + k as f64, b + (trials as usize - k) as f64)?;
        }
    }
    Ok(ll)
}

fn beta_binomial_score(counts: &[u64], trials: u32, a: f64, b: f64) -> Result<(f64, f64)> {
    let total: u64 = counts.iter().sum();
    let t = trials as f64;
    let base = digamma(a + b)?;
    let tail = digamma(a + b + t)?;
    let mut ga = (total as f64) * (base - digamma(a)? - tail);
    let mut gb = (total as f64) * (base - digamma(b)? - tail);
    for (k, &nk) in counts.iter().enumerate() {
        if nk > 0 {
            let kf = k as f64;
            ga += nk as f64 * digamma(a + kf)?;
            gb += nk as f64 * digamma(b + t - kf)?;
        }
    }
    Ok((ga, gb))
}

fn beta_binomial_start(counts: &[u64], trials: u32) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    let n = total as f64;
    let t = trials as f64;
    let mean = counts.iter().enumerate().map(|(k, &c)| k as f64 * c as f64).sum::<f64>() / n;
    let var = counts
        .iter()
        .enumerate()
        .map(|(k, &c)| c as f64 * (k as f64 - mean) * (k as f64 - mean))
        .sum::<f64>()
        / n;
    let p = (mean / t).clamp(1e-3, 1.0 - 1e-3);
    if trials > 1 && var > 0.0 {
        // Match the overdispersion: var = t p q (1 + (t-1) rho) with
        // rho = 1 / (a + b + 1).
        let rho = (var / (t * p * (1.0 - p)) - 1.0) / (t - 1.0);
        if rho > 1e-6 && rho < 1.0 {
            let s = 1.0 / rho - 1.0;
            return ((p * s).max(1e-3), ((1.0 - p) * s).max(1e-3));
        }
    }
    (p * 2.0, (1.0 - p) * 2.0)
}

fn newton_beta_binomial(counts: &[u64], trials: u32, start: (f64, f64)) -> Result<(f64, f64)> {
    let (mut a, mut b) = start;
    let t = trials as f64;
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let (ga, gb) = beta_binomial_score(counts, trials, a, b)?;
        if ga.abs().max(gb.abs()) <= 1e-9 {
            return Ok((a, b));
        }
        let total: u64 = counts.iter().sum();
        let nf = total as f64;
        let base = trigamma(a + b)?;
        let tail = trigamma(a + b + t)?;
        let mut haa = nf * (base - trigamma(a)? - tail);
        let mut hbb = nf * (base - trigamma(b)? - tail);
        let hab = nf * (base - tail);
        for (k, &nk) in counts.iter().enumerate() {
            if nk > 0 {
                let kf = k as f64;
                haa += nk as f64 * trigamma(a + kf)?;
                hbb += nk as f64 * trigamma(b + t - kf)?;
            }
        }
        // Ascend: solve (-H) d = g.
        let (m11, m22, m12) = (-haa, -hbb, -hab);
        let det = m11 * m22 - m12 * m12;
        if det <= 0.0 || !det.is_finite() {
            return Err(Error::NonConvergence {
                what: "beta-binomial Newton (indefinite curvature)",
                iterations: MAX_NEWTON_ITERATIONS,
            });
        }
        let mut da = (ga * m22 - gb * m12) / det;
        let mut db = (gb * m11 - ga * m12) / det;
        let before = beta_binomial_objective(counts, trials, a, b)?;
        let mut halvings = 0;
        loop {
            let (na, nb) = (a + da, b + db);
            if na > 0.0
                && nb > 0.0
                && beta_binomial_objective(counts, trials, na, nb)? >= before - 1e-12
            {
                a = na;
                b = nb;
                break;
            }
            da *= 0.5;
            db *= 0.5;
            halvings += 1;
            if halvings > 60 {
                return Err(Error::NonConvergence {
                    what: "beta-binomial step halving",
                    iterations: MAX_NEWTON_ITERATIONS,
                });
            }
        }
    }
    Err(Error::NonConvergence { what: "beta-binomial Newton", iterations: MAX_NEWTON_ITERATIONS })
}

/// Coordinate pattern search on the log scale, used when Newton stalls.
fn pattern_search_beta_binomial(
    counts: &[u64],
    trials: u32,
    start: (f64, f64),
) -> Result<(f64, f64)> {
    let (mut la, mut lb) = (start.0.ln(), start.1.ln());
    let mut best = beta_binomial_objective(counts, trials, la.exp(), lb.exp())?;
    let mut step = 0.5;
    while step > 1e-12 {
        let mut improved = false;
        for (da, db) in [(step, 0.0), (-step, 0.0), (0.0, step), (0.0, -step)] {
            let (ca, cb) = (la + da, lb + db);
            let value = beta_binomial_objective(counts, trials, ca.exp(), cb.exp())?;
            if value > best {
                best = value;
                la = ca;
                lb = cb;
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok((la.exp(), lb.exp()))
}

/// Maximum likelihood beta-binomial shapes for a histogram of counts over
/// `{0, ..., trials}`. `counts[k]` is the number of observations equal to
/// `k`; at least two distinct counts must be observed.
pub fn beta_binomial_mle(counts: &[u64], trials: u32) -> Result<(f64, f64)> {
    if counts.len() != trials as usize + 1 {
        return Err(Error::DimensionMismatch { expected: trials as usize + 1, got: counts.len() });
    }
    if counts.iter().filter(|&&c| c > 0).count() < 2 {
        return Err(Error::Degenerate { what: "beta-binomial MLE on a single observed count" });
    }
    let start = beta_binomial_start(counts, trials);
    let estimate = match newton_beta_binomial(counts, trials, start) {
        Ok(e) => e,
        Err(_) => {
            // Hard histograms can push Newton through flat regions; polish
            // a direct-search optimum with a fresh Newton run.
            let rough = pattern_search_beta_binomial(counts, trials, start)?;
            newton_beta_binomial(counts, trials, rough)?
        }
    };
    let (ga, gb) = beta_binomial_score(counts, trials, estimate.0, estimate.1)?;
    if ga.abs().max(gb.abs()) > 1e-8 {
        return Err(Error::NonConvergence {
            what: "beta-binomial gradient tolerance",
            iterations: MAX_NEWTON_ITERATIONS,
        });
    }
    Ok(estimate)
}

/// The moment-closure estimator given precomputed marginal MLEs and the
/// sample moment `s` of `(1-z1)(1-z2)/(z1 z2)`.
///
/// Solves the monic quadratic `x^2 + Bx + C = 0` with
/// `B = b c + a c + a d - b - d` and
/// `C = (a-1)(c-1) b d - a c (a-1)(c-1) s` (hats dropped), takes
/// `alpha_5 = max(0, larger root)`, and then floors, in this exact order,
/// `alpha_4 = max(0, b - alpha_5)`, `alpha_3 = max(0, d - alpha_5)`,
/// `alpha_2 = max(0, c - alpha_4)`, `alpha_1 = max(0, a - alpha_3)`.
pub fn mmle5_from_moments(m: &MarginalMles, s: f64) -> Result<Mmle5Result> {
    if !s.is_finite() || s <= 0.0 {
        return Err(Error::Domain { what: "sample cross moment", value: s });
    }
    let (a, b, c, d) = (m.a_hat, m.b_hat, m.c_hat, m.d_hat);
    if a <= 1.0 {
        return Err(Error::Pole { what: "moment closure needs marginal MLE a > 1", value: a });
    }
    if c <= 1.0 {
        return Err(Error::Pole { what: "moment closure needs marginal MLE c > 1", value: c });
    }
    let quadratic_b = b * c + a * c + a * d - b - d;
    let quadratic_c = (a - 1.0) * (c - 1.0) * b * d - a * c * (a - 1.0) * (c - 1.0) * s;
    let mut clipped = [false; 5];
    let discriminant = quadratic_b * quadratic_b - 4.0 * quadratic_c;
    let alpha5 = if discriminant < 0.0 {
        clipped[4] = true;
        0.0
    } else {
        let root = (-quadratic_b + discriminant.sqrt()) / 2.0;
        if root < 0.0 {
            clipped[4] = true;
            0.0
        } else {
            root
        }
    };
    let mut floor = |value: f64, slot: usize| -> f64 {
        if value < 0.0 {
            clipped[slot] = true;
            0.0
        } else {
            value
        }
    };
    let alpha4 = floor(b - alpha5, 3);
    let alpha3 = floor(d - alpha5, 2);
    let alpha2 = floor(c - alpha4, 1);
    let alpha1 = floor(a - alpha3, 0);
    Ok(Mmle5Result {
        alpha_hat: [alpha1, alpha2, alpha3, alpha4, alpha5],
        quadratic_b,
        quadratic_c,
        clipped,
    })
}

/// The moment-closure estimator of the five-parameter model from data.
pub fn mmle5(data: &BivariateDataset) -> Result<Mmle5Result> {
    let m = marginal_mles(data)?;
    mmle5_from_moments(&m, legacy_moment_stat(data))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::RngStream;

    #[test]
    fn beta_mle_exact_at_synthetic_statistics() {
        // Sufficient statistics generated exactly at (a, b) = (2, 3).
        let mean_log = digamma(2.0).unwrap() - digamma(5.0).unwrap();
        let mean_log1m = digamma(3.0).unwrap() - digamma(5.0).unwrap();
        let (a, b) = beta_mle_from_logmoments(mean_log, mean_log1m, (1.0, 1.0)).unwrap();
        assert!((a - 2.0).abs() < 1e-6, "a = {a}");
        assert!((b - 3.0).abs() < 1e-6, "b = {b}");
    }

    #[test]
    fn beta_mle_satisfies_score_equations() {
        let mut rng = RngStream::substream(41, 0);
        let values: Vec<f64> = (0..500).map(|_| rng.draw_beta(5.0, 2.5).unwrap()).collect();
        let (a, b) = beta_mle(&values).unwrap();
        let n = values.len() as f64;
        let mean_log = values.iter().map(|v| v.ln()).sum::<f64>() / n;
        let mean_log1m = values.iter().map(|v| (1.0 - v).ln()).sum::<f64>() / n;
        let r1 = digamma(a).unwrap() - digamma(a + b).unwrap() - mean_log;
        let r2 = digamma(b).unwrap() - digamma(a + b).unwrap() - mean_log1m;
        assert!(r1.abs() <= 1e-8 && r2.abs() <= 1e-8, "residuals {r1} {r2}");
    }

    #[test]
    fn beta_mle_recovers_truth_at_large_n() {
        let mut rng = RngStream::substream(42, 0);
        let values: Vec<f64> = (0..10_000).map(|_| rng.draw_beta(5.0, 2.5).unwrap()).collect();
        let (a, b) = beta_mle(&values).unwrap();
        assert!((a - 5.0).abs() < 0.15, "a = {a}");
        assert!((b - 2.5).abs() < 0.15, "b = {b}");
    }

    #[test]
    fn beta_mle_rejects_bad_input() {
        assert!(beta_mle(&[0.5]).is_err());
        assert!(matches!(beta_mle(&[0.5, 0.5, 0.5]), Err(Error::Degenerate { .. })));
        assert!(beta_mle(&[0.5, 1.2]).is_err());
        assert!(beta_mle(&[0.0, 0.5]).is_err());
    }

    #[test]
    fn beta_binomial_reference_histograms() {
        // Bacon row totals of the bundled purchase table.
        let (a, b) = beta_binomial_mle(&[430, 86, 23, 6, 3], 4).unwrap();
        assert!((a - 0.3571).abs() < 1e-3, "bacon a = {a}");
        assert!((b - 4.4552).abs() < 1e-3, "bacon b = {b}");

        // Egg column totals.
        let (a, b) = beta_binomial_mle(&[297, 153, 66, 23, 9], 4).unwrap();
        assert!((a - 0.8592).abs() < 1e-3, "egg a = {a}");
        assert!((b - 3.9593).abs() < 1e-3, "egg b = {b}");

        // Reversing the histogram swaps the shapes.
        let (a, b) = beta_binomial_mle(&[9, 23, 66, 153, 297], 4).unwrap();
        assert!((a - 3.9593).abs() < 1e-3, "reversed a = {a}");
        assert!((b - 0.8592).abs() < 1e-3, "reversed b = {b}");
    }

    #[test]
    fn beta_binomial_optimum_beats_perturbations() {
        let counts = [430u64, 86, 23, 6, 3];
        let (a, b) = beta_binomial_mle(&counts, 4).unwrap();
        let at_opt = beta_binomial_objective(&counts, 4, a, b).unwrap();
        let mut rng = RngStream::substream(43, 0);
        for _ in 0..32 {
            let angle = rng.uniform() * std::f64::consts::TAU;
            let (pa, pb) = (a + 0.05 * angle.cos(), b + 0.05 * angle.sin());
            if pa > 0.0 && pb > 0.0 {
                let perturbed = beta_binomial_objective(&counts, 4, pa, pb).unwrap();
                assert!(perturbed <= at_opt, "({pa},{pb}) beats the optimum");
            }
        }
    }

    #[test]
    fn beta_binomial_rejects_bad_input() {
        assert!(matches!(beta_binomial_mle(&[10, 0, 0, 0, 0], 4), Err(Error::Degenerate { .. })));
        assert!(matches!(beta_binomial_mle(&[1, 2, 3], 4), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn moment_closure_exact_at_reference_point() {
        let m = MarginalMles::new(2.0, 2.0, 2.0, 2.0).unwrap();
        let r = mmle5_from_moments(&m, 3.25).unwrap();
        assert!((r.quadratic_b - 8.0).abs() < 1e-12);
        assert!((r.quadratic_c + 9.0).abs() < 1e-12);
        for (i, &v) in r.alpha_hat.iter().enumerate() {
            assert!((v - 1.0).abs() < 1e-9, "component {i} = {v}");
        }
        assert_eq!(r.clipped, [false; 5]);
    }

    #[test]
    fn moment_closure_clips_shared_component() {
        // A small sample moment drives both roots negative.
        let m = MarginalMles::new(2.0, 2.0, 2.0, 2.0).unwrap();
        let r = mmle5_from_moments(&m, 0.2).unwrap();
        assert_eq!(r.alpha_hat[4], 0.0);
        assert!(r.clipped[4]);
        // With alpha_5 = 0 the others reduce to the marginal fits.
        assert_eq!(r.alpha_hat[3], 2.0);
        assert_eq!(r.alpha_hat[2], 2.0);
        assert_eq!(r.alpha_hat[1], 0.0);
        assert_eq!(r.alpha_hat[0], 0.0);
    }

    #[test]
    fn moment_closure_negative_root_is_clipped_not_propagated() {
        let m = MarginalMles::new(3.0, 1.0, 3.0, 1.0).unwrap();
        // s below the independent-model moment pushes the larger root
        // negative; the estimate must stay at the floor.
        let r = mmle5_from_moments(&m, 0.05).unwrap();
        assert!(r.alpha_hat.iter().all(|&x| x >= 0.0));
        assert_eq!(r.alpha_hat[4], 0.0);
        assert!(r.clipped[4]);
    }

    #[test]
    fn moment_closure_pole_errors() {
        let m = MarginalMles::new(0.9, 2.0, 2.0, 2.0).unwrap();
        assert!(matches!(mmle5_from_moments(&m, 1.0), Err(Error::Pole { .. })));
        let m = MarginalMles::new(2.0, 2.0, 1.0, 2.0).unwrap();
        assert!(matches!(mmle5_from_moments(&m, 1.0), Err(Error::Pole { .. })));
    }

    #[test]
    fn moment_closure_from_data_roughly_recovers_truth() {
        use crate::model::{BivariateBeta, ModelParams};
        let ModelParams::Five(p) = crate::model::named_setting("A2").unwrap() else {
            panic!("A2 is five-parameter")
        };
        let mut rng = RngStream::substream(44, 0);
        let data = p.sample_dataset(20_000, &mut rng).unwrap();
        let r = mmle5(&data).unwrap();
        for (i, (&hat, &truth)) in r.alpha_hat.iter().zip(p.alpha()).enumerate() {
            assert!((hat - truth).abs() < 0.4, "component {i}: {hat} vs {truth}");
        }
    }

    #[test]
    fn marginal_mles_validate() {
        assert!(MarginalMles::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(MarginalMles::new(1.0, 1.0, f64::NAN, 1.0).is_err());
        assert!(MarginalMles::new(1.0, 1.0, 1.0, 1.0).is_ok());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // When nothing clips, the four marginal identities hold exactly.
            #[test]
            fn unclipped_estimates_recompose_marginals(
                a in 1.2f64..8.0, b in 0.2f64..8.0, c in 1.2f64..8.0, d in 0.2f64..8.0,
                s in 0.01f64..20.0,
            ) {
                let m = MarginalMles::new(a, b, c, d).unwrap();
                let r = mmle5_from_moments(&m, s).unwrap();
                let h = &r.alpha_hat;
                prop_assert!(h.iter().all(|&x| x >= 0.0));
                if r.clipped == [false; 5] {
                    prop_assert!((h[0] + h[2] - a).abs() < 1e-12);
                    prop_assert!((h[3] + h[4] - b).abs() < 1e-12);
                    prop_assert!((h[1] + h[3] - c).abs() < 1e-12);
                    prop_assert!((h[2] + h[4] - d).abs() < 1e-12);
                }
            }

            // For valid inputs (a, c > 1, s > 0) the discriminant is
            // provably positive: C <= (a-1)(c-1) b d <= (b(c-1)+d(a-1))^2/4
            // < B^2/4 by AM-GM, so the complex-root guard is defensive only.
            #[test]
            fn quadratic_always_has_real_roots(
                a in 1.0001f64..20.0, b in 0.01f64..20.0,
                c in 1.0001f64..20.0, d in 0.01f64..20.0,
                s in 1e-6f64..50.0,
            ) {
                let m = MarginalMles::new(a, b, c, d).unwrap();
                let r = mmle5_from_moments(&m, s).unwrap();
                prop_assert!(r.quadratic_b * r.quadratic_b - 4.0 * r.quadratic_c >= 0.0);
            }

            #[test]
            fn beta_mle_score_residuals_small(
                a in 0.5f64..8.0, b in 0.5f64..8.0, seed in 0u64..200,
            ) {
                let mut rng = RngStream::substream(seed, 77);
                let values: Vec<f64> =
                    (0..200).map(|_| rng.draw_beta(a, b).unwrap()).collect();
                let (ah, bh) = beta_mle(&values).unwrap();
                let n = values.len() as f64;
                let mean_log = values.iter().map(|v| v.ln()).sum::<f64>() / n;
                let mean_log1m = values.iter().map(|v| (1.0 - v).ln()).sum::<f64>() / n;
                let r1 = digamma(ah).unwrap() - digamma(ah + bh).unwrap() - mean_log;
                let r2 = digamma(bh).unwrap() - digamma(ah + bh).unwrap() - mean_log1m;
                prop_assert!(r1.abs() <= 1e-8 && r2.abs() <= 1e-8);
            }
        }
    }
}
