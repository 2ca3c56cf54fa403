//! The bivariate beta families built from ratios of gamma sums.
//!
//! The general (eight-parameter) construction draws independent
//! `U_i ~ Gamma(delta_i, 1)` for `i = 1..8` and forms
//!
//! ```text
//! V1 = (U1 + U5 + U7) / (U3 + U6 + U8)
//! V2 = (U2 + U5 + U8) / (U4 + U6 + U7)
//! Z1 = V1 / (1 + V1),   Z2 = V2 / (1 + V2)
//! ```
//!
//! so each marginal is a beta distribution while the shared gamma
//! components induce dependence of either sign. The five-parameter family
//! is the sub-family with `delta_3 = delta_4 = delta_5 = 0`, relabelled
//! `alpha_1..alpha_5`; it keeps both dependence signs and admits a
//! closed-form cross moment that the estimation routines invert.
//!
//! A component with weight zero contributes exactly zero to its sums and
//! consumes no random stream state, so sampling the five-parameter family
//! directly or through [`embed_bb5`] yields bit-identical output.

use crate::error::{Error, Result};
use crate::numerics::{pearson, RngStream};

/// Parameters of the eight-parameter family. All components are
/// nonnegative and each of the four marginal beta shapes must be positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bb8Params {
    delta: [f64; 8],
}

/// Parameters of the five-parameter family. All components are
/// nonnegative and each of the four marginal beta shapes must be positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bb5Params {
    alpha: [f64; 5],
}

fn check_components(what: &'static str, values: &[f64]) -> Result<()> {
    for &v in values {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::InvalidParameter { what, value: v });
        }
    }
    Ok(())
}

fn check_marginal_shapes(shapes: [(f64, &'static str); 4]) -> Result<()> {
    for (s, what) in shapes {
        if s <= 0.0 {
            return Err(Error::InvalidParameter { what, value: s });
        }
    }
    Ok(())
}

impl Bb8Params {
    pub fn new(delta: [f64; 8]) -> Result<Self> {
        check_components("eight-parameter model component", &delta)?;
        let p = Bb8Params { delta };
        let ((a1, b1), (a2, b2)) = p.marginal_params();
        check_marginal_shapes([
            (a1, "first marginal shape a"),
            (b1, "first marginal shape b"),
            (a2, "second marginal shape a"),
            (b2, "second marginal shape b"),
        ])?;
        Ok(p)
    }

    pub fn delta(&self) -> &[f64; 8] {
        &self.delta
    }

    /// Beta shape pairs of the two marginals:
    /// `Z1 ~ Beta(d1+d5+d7, d3+d6+d8)` and `Z2 ~ Beta(d2+d5+d8, d4+d6+d7)`.
    pub fn marginal_params(&self) -> ((f64, f64), (f64, f64)) {
        let d = &self.delta;
        ((d[0] + d[4] + d[6], d[2] + d[5] + d[7]), (d[1] + d[4] + d[7], d[3] + d[5] + d[6]))
    }
}

impl Bb5Params {
    pub fn new(alpha: [f64; 5]) -> Result<Self> {
        check_components("five-parameter model component", &alpha)?;
        let p = Bb5Params { alpha };
        let ((a1, b1), (a2, b2)) = p.marginal_params();
        check_marginal_shapes([
            (a1, "first marginal shape a"),
            (b1, "first marginal shape b"),
            (a2, "second marginal shape a"),
            (b2, "second marginal shape b"),
        ])?;
        Ok(p)
    }

    pub fn alpha(&self) -> &[f64; 5] {
        &self.alpha
    }

    /// Beta shape pairs of the two marginals:
    /// `Z1 ~ Beta(a1+a3, a4+a5)` and `Z2 ~ Beta(a2+a4, a3+a5)`.
    pub fn marginal_params(&self) -> ((f64, f64), (f64, f64)) {
        let a = &self.alpha;
        ((a[0] + a[2], a[3] + a[4]), (a[1] + a[3], a[2] + a[4]))
    }
}

/// Re-express five-parameter values in the eight-parameter coordinates.
/// The image has `delta_3 = delta_4 = delta_5 = 0` and sampling it is
/// bit-identical to sampling the five-parameter model directly.
pub fn embed_bb5(p: &Bb5Params) -> Bb8Params {
    let a = &p.alpha;
    // Construction cannot fail: the marginal shape sums are unchanged.
    Bb8Params { delta: [a[0], a[1], 0.0, 0.0, 0.0, a[4], a[2], a[3]] }
}

fn draw_component(rng: &mut RngStream, shape: f64) -> Result<f64> {
    if shape == 0.0 {
        Ok(0.0)
    } else {
        rng.draw_gamma(shape, 1.0)
    }
}

/// Draw one pair from the eight-parameter model.
///
/// Each ratio is evaluated as `numerator / (numerator + denominator)`,
/// which keeps the result inside (0, 1) whenever both sums are positive.
/// A sum that underflows to zero (possible only for extremely small
/// weights) makes the pair degenerate and is reported as an error.
pub fn sample_bb8(p: &Bb8Params, rng: &mut RngStream) -> Result<(f64, f64)> {
    let d = &p.delta;
    let mut u = [0.0; 8];
    for i in 0..8 {
        u[i] = draw_component(rng, d[i])?;
    }
    let n1 = u[0] + u[4] + u[6];
    let d1 = u[2] + u[5] + u[7];
    let n2 = u[1] + u[4] + u[7];
    let d2 = u[3] + u[5] + u[6];
    let z1 = n1 / (n1 + d1);
    let z2 = n2 / (n2 + d2);
    if !(z1 > 0.0 && z1 < 1.0 && z2 > 0.0 && z2 < 1.0) {
        return Err(Error::Degenerate {
            what: "bivariate beta draw on the unit-interval boundary",
        });
    }
    Ok((z1, z2))
}

/// Draw one pair from the five-parameter model.
pub fn sample_bb5(p: &Bb5Params, rng: &mut RngStream) -> Result<(f64, f64)> {
    sample_bb8(&embed_bb5(p), rng)
}

/// Closed-form value of `E[(1-Z1)(1-Z2) / (Z1 Z2)]` for the
/// five-parameter model. Finite only when both first marginal shapes
/// exceed one, i.e. `a1 + a3 > 1` and `a2 + a4 > 1`.
pub fn theoretical_cross_moment(p: &Bb5Params) -> Result<f64> {
    let a = &p.alpha;
    let s1 = a[0] + a[2];
    let s2 = a[1] + a[3];
    if s1 <= 1.0 {
        return Err(Error::Pole { what: "cross moment needs a1 + a3 > 1", value: s1 });
    }
    if s2 <= 1.0 {
        return Err(Error::Pole { what: "cross moment needs a2 + a4 > 1", value: s2 });
    }
    let t1 = (a[3] / s2) * (a[2] / s1);
    let t2 = (a[2] / s1) * (a[4] / (s2 - 1.0));
    let t3 = (a[3] / s2) * (a[4] / (s1 - 1.0));
    let t4 = (a[4] / (s1 - 1.0)) * ((a[4] + 1.0) / (s2 - 1.0));
    Ok(t1 + t2 + t3 + t4)
}

/// A sample of pairs with both coordinates strictly inside (0, 1), the
/// common currency between the samplers, the summary statistics, and the
/// estimators.
#[derive(Clone, Debug, PartialEq)]
pub struct BivariateDataset {
    pairs: Vec<(f64, f64)>,
}

impl BivariateDataset {
    pub fn new(pairs: Vec<(f64, f64)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::EmptySample { what: "bivariate dataset" });
        }
        for &(z1, z2) in &pairs {
            if !(z1 > 0.0 && z1 < 1.0) {
                return Err(Error::Domain { what: "dataset first coordinate", value: z1 });
            }
            if !(z2 > 0.0 && z2 < 1.0) {
                return Err(Error::Domain { what: "dataset second coordinate", value: z2 });
            }
        }
        Ok(BivariateDataset { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }
}

/// Common interface of the two model families, so that simulation studies
/// and inference engines can be written once.
pub trait BivariateBeta {
    /// Number of free parameters (5 or 8).
    fn dim(&self) -> usize;

    /// The parameter vector as a slice, in model order.
    fn params(&self) -> &[f64];

    /// Beta shape pairs of the two marginals.
    fn marginals(&self) -> ((f64, f64), (f64, f64));

    /// Draw one pair.
    fn sample(&self, rng: &mut RngStream) -> Result<(f64, f64)>;

    /// Draw a dataset of `n` pairs.
    fn sample_dataset(&self, n: usize, rng: &mut RngStream) -> Result<BivariateDataset> {
        if n == 0 {
            return Err(Error::EmptySample { what: "requested dataset" });
        }
        let mut pairs = Vec::with_capacity(n);
        for _ in 0..n {
            pairs.push(self.sample(rng)?);
        }
        BivariateDataset::new(pairs)
    }
}

impl BivariateBeta for Bb5Params {
    fn dim(&self) -> usize {
        5
    }

    fn params(&self) -> &[f64] {
        &self.alpha
    }

    fn marginals(&self) -> ((f64, f64), (f64, f64)) {
        self.marginal_params()
    }

    fn sample(&self, rng: &mut RngStream) -> Result<(f64, f64)> {
        sample_bb5(self, rng)
    }
}

impl BivariateBeta for Bb8Params {
    fn dim(&self) -> usize {
        8
    }

    fn params(&self) -> &[f64] {
        &self.delta
    }

    fn marginals(&self) -> ((f64, f64), (f64, f64)) {
        self.marginal_params()
    }

    fn sample(&self, rng: &mut RngStream) -> Result<(f64, f64)> {
        sample_bb8(self, rng)
    }
}

/// A parameter vector of either family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModelParams {
    Five(Bb5Params),
    Eight(Bb8Params),
}

impl ModelParams {
    /// Build from a flat vector whose length selects the family.
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        match values.len() {
            5 => {
                let mut a = [0.0; 5];
                a.copy_from_slice(values);
                Ok(ModelParams::Five(Bb5Params::new(a)?))
            }
            8 => {
                let mut d = [0.0; 8];
                d.copy_from_slice(values);
                Ok(ModelParams::Eight(Bb8Params::new(d)?))
            }
            n => Err(Error::DimensionMismatch { expected: 5, got: n }),
        }
    }

    pub fn as_model(&self) -> &dyn BivariateBeta {
        match self {
            ModelParams::Five(p) => p,
            ModelParams::Eight(p) => p,
        }
    }

    pub fn dim(&self) -> usize {
        self.as_model().dim()
    }

    pub fn params(&self) -> &[f64] {
        self.as_model().params()
    }
}

/// The named parameter settings used throughout the simulation studies.
/// `A1`-`A3` are five-parameter, `A4`-`A5` eight-parameter.
pub fn named_setting(name: &str) -> Option<ModelParams> {
    let values: &[f64] = match name.to_ascii_uppercase().as_str() {
        "A1" => &[1.0, 1.0, 1.0, 1.0, 1.0],
        "A2" => &[3.0, 2.5, 2.0, 1.5, 1.0],
        "A3" => &[1.0, 1.0, 2.0, 6.0, 1.0],
        "A4" => &[2.0, 1.0, 1.0, 2.0, 4.0, 6.0, 2.0, 1.0],
        "A5" => &[3.5, 2.0, 1.5, 4.0, 1.0, 2.5, 3.0, 4.5],
        _ => return None,
    };
    Some(ModelParams::from_slice(values).expect("named settings are valid"))
}

/// Monte Carlo estimate of the Pearson correlation of `(Z1, Z2)` under the
/// given model, from `n` fresh draws.
pub fn mc_correlation(model: &dyn BivariateBeta, n: usize, rng: &mut RngStream) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter { what: "correlation sample size", value: n as f64 });
    }
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        pairs.push(model.sample(rng)?);
    }
    pearson(&pairs).ok_or(Error::Degenerate { what: "correlation of a constant sample" })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bb5(a: [f64; 5]) -> Bb5Params {
        Bb5Params::new(a).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(Bb5Params::new([1.0, 1.0, 1.0, 1.0, -0.1]).is_err());
        assert!(Bb5Params::new([f64::NAN, 1.0, 1.0, 1.0, 1.0]).is_err());
        // First marginal's second shape is a4 + a5 = 0.
        assert!(Bb5Params::new([1.0, 1.0, 1.0, 0.0, 0.0]).is_err());
        // Zero interaction components are fine while the sums stay positive.
        assert!(Bb5Params::new([1.0, 1.0, 0.0, 0.0, 1.0]).is_ok());
        assert!(Bb8Params::new([1.0; 8]).is_ok());
        assert!(Bb8Params::new([0.0, 1.0, 1.0, 1.0, 0.0, 1.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn marginal_shapes() {
        let p = bb5([3.0, 2.5, 2.0, 1.5, 1.0]);
        let ((a1, b1), (a2, b2)) = p.marginal_params();
        assert_eq!((a1, b1), (5.0, 2.5));
        assert_eq!((a2, b2), (4.0, 3.0));

        let q = Bb8Params::new([2.0, 1.0, 1.0, 2.0, 4.0, 6.0, 2.0, 1.0]).unwrap();
        let ((a1, b1), (a2, b2)) = q.marginal_params();
        assert_eq!((a1, b1), (8.0, 8.0));
        assert_eq!((a2, b2), (6.0, 10.0));
    }

    #[test]
    fn embedding_preserves_marginals() {
        let p = bb5([3.0, 2.5, 2.0, 1.5, 1.0]);
        assert_eq!(p.marginal_params(), embed_bb5(&p).marginal_params());
    }

    #[test]
    fn embedding_is_bit_identical_under_sampling() {
        for name in ["A1", "A2", "A3"] {
            let ModelParams::Five(p) = named_setting(name).unwrap() else {
                panic!("expected a five-parameter setting")
            };
            let e = embed_bb5(&p);
            let mut r1 = RngStream::substream(11, 4);
            let mut r2 = RngStream::substream(11, 4);
            for _ in 0..1000 {
                let (x1, y1) = sample_bb5(&p, &mut r1).unwrap();
                let (x2, y2) = sample_bb8(&e, &mut r2).unwrap();
                assert_eq!(x1.to_bits(), x2.to_bits());
                assert_eq!(y1.to_bits(), y2.to_bits());
            }
        }
    }

    #[test]
    fn samples_are_strictly_interior() {
        let settings = ["A1", "A2", "A3", "A4", "A5"];
        for name in settings {
            let m = named_setting(name).unwrap();
            let mut rng = RngStream::substream(12, 0);
            for _ in 0..5000 {
                let (z1, z2) = m.as_model().sample(&mut rng).unwrap();
                assert!(z1 > 0.0 && z1 < 1.0, "{name}: z1 = {z1}");
                assert!(z2 > 0.0 && z2 < 1.0, "{name}: z2 = {z2}");
            }
        }
    }

    #[test]
    fn sample_means_match_marginal_betas() {
        for name in ["A2", "A4"] {
            let m = named_setting(name).unwrap();
            let ((a1, b1), (a2, b2)) = m.as_model().marginals();
            let mut rng = RngStream::substream(13, 0);
            let n = 200_000;
            let (mut s1, mut s2) = (0.0, 0.0);
            for _ in 0..n {
                let (z1, z2) = m.as_model().sample(&mut rng).unwrap();
                s1 += z1;
                s2 += z2;
            }
            let (m1, m2) = (s1 / n as f64, s2 / n as f64);
            let t1 = a1 / (a1 + b1);
            let t2 = a2 / (a2 + b2);
            let v1 = a1 * b1 / ((a1 + b1).powi(2) * (a1 + b1 + 1.0));
            let v2 = a2 * b2 / ((a2 + b2).powi(2) * (a2 + b2 + 1.0));
            assert!((m1 - t1).abs() < 4.0 * (v1 / n as f64).sqrt(), "{name}: {m1} vs {t1}");
            assert!((m2 - t2).abs() < 4.0 * (v2 / n as f64).sqrt(), "{name}: {m2} vs {t2}");
        }
    }

    #[test]
    fn cross_moment_closed_form_values() {
        let all_ones = bb5([1.0, 1.0, 1.0, 1.0, 1.0]);
        assert!((theoretical_cross_moment(&all_ones).unwrap() - 3.25).abs() < 1e-14);

        let independent = bb5([2.0, 2.0, 2.0, 2.0, 0.0]);
        assert!((theoretical_cross_moment(&independent).unwrap() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn cross_moment_pole_detection() {
        // a1 + a3 = 1 sits exactly on the pole.
        let p = bb5([0.5, 2.0, 0.5, 2.0, 1.0]);
        assert!(matches!(theoretical_cross_moment(&p), Err(Error::Pole { .. })));
        let q = bb5([2.0, 0.5, 2.0, 0.5, 1.0]);
        assert!(matches!(theoretical_cross_moment(&q), Err(Error::Pole { .. })));
    }

    #[test]
    fn cross_moment_matches_monte_carlo() {
        // Needs both first shapes > 2 for the sample moment to have finite
        // variance, hence a setting away from the pole.
        let p = bb5([3.0, 3.0, 1.0, 1.0, 1.0]);
        let want = theoretical_cross_moment(&p).unwrap();
        let mut rng = RngStream::substream(14, 0);
        let n = 400_000;
        let (mut sum, mut sumsq) = (0.0, 0.0);
        for _ in 0..n {
            let (z1, z2) = sample_bb5(&p, &mut rng).unwrap();
            let x = (1.0 - z1) * (1.0 - z2) / (z1 * z2);
            sum += x;
            sumsq += x * x;
        }
        let mean = sum / n as f64;
        let sd = (sumsq / n as f64 - mean * mean).sqrt();
        let se = sd / (n as f64).sqrt();
        assert!((mean - want).abs() < 4.0 * se, "mc {mean} vs exact {want} (se {se})");
    }

    #[test]
    fn correlation_signs_follow_construction() {
        // The fifth component feeds both denominators, so weighting it
        // heavily makes the coordinates rise and fall together (MC says
        // r ~ 0.18 here); the third and fourth sit cross-wise in one
        // numerator and the other denominator, pushing correlation
        // negative. The margins are ~40 MC standard errors.
        let mut rng = RngStream::substream(15, 0);
        let positive = bb5([1.0, 1.0, 0.0, 0.0, 5.0]);
        let r = mc_correlation(&positive, 50_000, &mut rng).unwrap();
        assert!(r > 0.1, "shared-denominator model should correlate, got {r}");

        let negative = bb5([1.0, 1.0, 4.0, 4.0, 0.0]);
        let r = mc_correlation(&negative, 50_000, &mut rng).unwrap();
        assert!(r < -0.2, "cross-component model should anticorrelate, got {r}");
    }

    #[test]
    fn named_settings_lookup() {
        assert_eq!(named_setting("A1").unwrap().dim(), 5);
        assert_eq!(named_setting("a4").unwrap().dim(), 8);
        assert!(named_setting("A6").is_none());
        let a2 = named_setting("A2").unwrap();
        assert_eq!(a2.params(), &[3.0, 2.5, 2.0, 1.5, 1.0]);
    }

    #[test]
    fn dataset_validation() {
        assert!(BivariateDataset::new(vec![]).is_err());
        assert!(BivariateDataset::new(vec![(0.5, 1.0)]).is_err());
        assert!(BivariateDataset::new(vec![(0.0, 0.5)]).is_err());
        assert!(BivariateDataset::new(vec![(0.5, f64::NAN)]).is_err());
        let d = BivariateDataset::new(vec![(0.1, 0.2), (0.3, 0.4)]).unwrap();
        assert_eq!(d.len(), 2);
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn shape() -> impl Strategy<Value = f64> {
            0.05f64..20.0
        }

        proptest! {
            #[test]
            fn five_parameter_draws_stay_interior(
                a1 in shape(), a2 in shape(), a3 in shape(), a4 in shape(), a5 in shape(),
                seed in 0u64..1000,
            ) {
                let p = Bb5Params::new([a1, a2, a3, a4, a5]).unwrap();
                let mut rng = RngStream::substream(seed, 0);
                for _ in 0..20 {
                    let (z1, z2) = sample_bb5(&p, &mut rng).unwrap();
                    prop_assert!(z1 > 0.0 && z1 < 1.0);
                    prop_assert!(z2 > 0.0 && z2 < 1.0);
                }
            }

            #[test]
            fn embedding_marginals_agree(
                a1 in shape(), a2 in shape(), a3 in shape(), a4 in shape(), a5 in shape(),
            ) {
                let p = Bb5Params::new([a1, a2, a3, a4, a5]).unwrap();
                prop_assert_eq!(p.marginal_params(), embed_bb5(&p).marginal_params());
            }

            #[test]
            fn cross_moment_is_positive_when_finite(
                a1 in 0.6f64..10.0, a2 in 0.6f64..10.0,
                a3 in 0.6f64..10.0, a4 in 0.6f64..10.0, a5 in 0.0f64..10.0,
            ) {
                let p = Bb5Params::new([a1, a2, a3, a4, a5]).unwrap();
                let m = theoretical_cross_moment(&p).unwrap();
                prop_assert!(m > 0.0);
            }
        }
    }
}
