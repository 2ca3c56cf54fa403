//! Summary statistics of bivariate unit-interval samples, and the L1
//! distance between summary vectors.
//!
//! The five-component vector carries the marginal log-moments and the
//! Pearson correlation:
//!
//! ```text
//! S1 = mean log z1        S2 = mean log z2
//! S3 = mean log(1 - z1)   S4 = mean log(1 - z2)
//! S5 = Pearson correlation of (z1, z2)
//! ```
//!
//! The eight-component vector appends the Spearman rank correlation, the
//! Kendall correlation, and the mean of `sqrt(z1 z2)`. A separate legacy
//! statistic, the sample mean of `(1-z1)(1-z2)/(z1 z2)`, feeds the
//! moment-closure estimator; it is deliberately not part of the vectors.

use crate::error::{Error, Result};
use crate::model::BivariateDataset;
use crate::numerics::pearson;

/// An ordered vector of summary statistics. Produced with five components
/// for the five-parameter model and eight for the eight-parameter model.
#[derive(Clone, Debug, PartialEq)]
pub struct SummaryVector {
    values: Vec<f64>,
}

impl SummaryVector {
    /// Wrap raw components after checking they are all finite.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySample { what: "summary vector" });
        }
        for &v in &values {
            if !v.is_finite() {
                return Err(Error::Domain { what: "summary component", value: v });
            }
        }
        Ok(SummaryVector { values })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// How the rank-correlation component `S6` interprets the differences
/// `d_i` in `1 - 6 sum d_i^2 / (n (n^2 - 1))`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SpearmanVariant {
    /// `d_i` is the difference of within-column average ranks: the
    /// standard Spearman rank correlation, always in [-1, 1].
    #[default]
    WithinColumnRanks,
    /// `d_i = z_{i1} - z_{i2}` on the raw values. Not a correlation, but
    /// kept available for comparison with sources that print the formula
    /// this way.
    RawDifferences,
}

/// Average ranks (1-based), with tied values sharing the mean of the
/// positions they occupy.
fn average_ranks(values: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).expect("finite values"));
    let mut ranks = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end (0-based) hold ties; their 1-based ranks
        // average to (start + end + 1) / 2.
        let avg = (start + end + 1) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = avg;
        }
        start = end;
    }
    ranks
}

fn spearman(pairs: &[(f64, f64)], variant: SpearmanVariant) -> f64 {
    let n = pairs.len() as f64;
    let sum_d2: f64 = match variant {
        SpearmanVariant::WithinColumnRanks => {
            let xs: Vec<f64> = pairs.iter().map(|p| p.0).collect();
            let ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
            let rx = average_ranks(&xs);
            let ry = average_ranks(&ys);
            rx.iter().zip(&ry).map(|(a, b)| (a - b) * (a - b)).sum()
        }
        SpearmanVariant::RawDifferences => pairs.iter().map(|&(x, y)| (x - y) * (x - y)).sum(),
    };
    1.0 - 6.0 * sum_d2 / (n * (n * n - 1.0))
}

/// Kendall correlation by pair enumeration; tied pairs in either
/// coordinate count as neither concordant nor discordant, while the
/// denominator stays n(n-1)/2.
fn kendall(pairs: &[(f64, f64)]) -> f64 {
    let n = pairs.len();
    let mut concordant = 0i64;
    let mut discordant = 0i64;
    for i in 0..n {
        for j in (i + 1)..n {
            let dx = pairs[i].0 - pairs[j].0;
            let dy = pairs[i].1 - pairs[j].1;
            let s = dx * dy;
            if s > 0.0 {
                concordant += 1;
            } else if s < 0.0 {
                discordant += 1;
            }
        }
    }
    (concordant - discordant) as f64 / (n as f64 * (n as f64 - 1.0) / 2.0)
}

fn base_five(data: &BivariateDataset) -> Result<[f64; 5]> {
    let pairs = data.pairs();
    let n = pairs.len() as f64;
    let rho = pearson(pairs).ok_or(Error::Degenerate {
        what: "summary correlation (a coordinate has zero variance)",
    })?;
    let (mut l1, mut l2, mut c1, mut c2) = (0.0, 0.0, 0.0, 0.0);
    for &(z1, z2) in pairs {
        l1 += z1.ln();
        l2 += z2.ln();
        c1 += (1.0 - z1).ln();
        c2 += (1.0 - z2).ln();
    }
    Ok([l1 / n, l2 / n, c1 / n, c2 / n, rho])
}

/// The five-component summary vector. Needs at least two pairs with
/// variation in both coordinates.
pub fn summaries5(data: &BivariateDataset) -> Result<SummaryVector> {
    SummaryVector::new(base_five(data)?.to_vec())
}

/// The eight-component summary vector, with the default (rank-based)
/// Spearman component.
pub fn summaries8(data: &BivariateDataset) -> Result<SummaryVector> {
    summaries8_with_variant(data, SpearmanVariant::default())
}

/// The eight-component summary vector with an explicit choice of
/// Spearman convention.
pub fn summaries8_with_variant(
    data: &BivariateDataset,
    variant: SpearmanVariant,
) -> Result<SummaryVector> {
    let base = base_five(data)?;
    let pairs = data.pairs();
    let n = pairs.len() as f64;
    let s6 = spearman(pairs, variant);
    let s7 = kendall(pairs);
    let s8 = pairs.iter().map(|&(z1, z2)| (z1 * z2).sqrt()).sum::<f64>() / n;
    let mut values = base.to_vec();
    values.extend_from_slice(&[s6, s7, s8]);
    SummaryVector::new(values)
}

/// The sample moment `(1/n) sum (1-z1)(1-z2) / (z1 z2)`. Observations
/// near the lower-left corner legitimately make this huge; no smoothing
/// is applied.
pub fn legacy_moment_stat(data: &BivariateDataset) -> f64 {
    let pairs = data.pairs();
    let n = pairs.len() as f64;
    pairs.iter().map(|&(z1, z2)| (1.0 - z1) * (1.0 - z2) / (z1 * z2)).sum::<f64>() / n
}

/// Unweighted L1 distance between summary vectors of equal length.
pub fn l1_distance(a: &SummaryVector, b: &SummaryVector) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), got: b.len() });
    }
    Ok(a.values().iter().zip(b.values()).map(|(x, y)| (x - y).abs()).sum())
}
