//! The bivariate beta-binomial application: 5x5 purchase-count tables.
//!
//! Each of `N_h` households makes four shopping trips; on each trip it
//! buys bacon (or not) and eggs (or not) with household-specific
//! probabilities `(p_b, p_e)` drawn once from a five-parameter bivariate
//! beta. The observed data are the aggregated counts: cell `(l, j)` is
//! the number of households that bought bacon on `l` trips and eggs on
//! `j` trips. Inference for the bivariate beta parameters runs through
//! the ABC engines with whole simulated tables compared by cellwise L1
//! distance.

use std::time::Duration;

use crate::abc::{
    abc_ar, abc_mh_observed, iid_mcse, posterior_mean, AbcProblem, MhConfig,
    DEFAULT_BURN_IN_FRACTION,
};
use crate::error::{Error, Result};
use crate::model::{mc_correlation, sample_bb5, Bb5Params};
use crate::numerics::{pearson, RngStream, StreamFamily};
use crate::priors::{Prior, PriorProduct};

/// Trips per household; the tables are (TABLE_TRIALS+1) square.
pub const TABLE_TRIALS: u32 = 4;

/// Stream address (relative to the run's family) of the single MH chain.
const MH_CHAIN_STREAM: u64 = 1 << 62;

/// Stream address of the posterior-mean correlation Monte Carlo, kept far
/// from the accept-reject proposal indices.
const CORRELATION_STREAM: u64 = 1 << 63;

/// A 5x5 table of household counts, indexed `(bacon count, egg count)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    cells: [[u64; 5]; 5],
}

impl CountTable {
    pub fn new(cells: [[u64; 5]; 5]) -> Self {
        CountTable { cells }
    }

    /// Parse a whitespace-separated 5x5 integer grid. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut cells = [[0u64; 5]; 5];
        let mut rows = 0;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if rows == 5 {
                return Err(Error::Parse("count table has more than five rows".into()));
            }
            let mut cols = 0;
            for token in line.split_whitespace() {
                if cols == 5 {
                    return Err(Error::Parse(format!(
                        "row {} has more than five entries",
                        rows + 1
                    )));
                }
                cells[rows][cols] = token
                    .parse::<u64>()
                    .map_err(|e| Error::Parse(format!("bad count '{token}': {e}")))?;
                cols += 1;
            }
            if cols != 5 {
                return Err(Error::Parse(format!(
                    "row {} has {cols} entries, need five",
                    rows + 1
                )));
            }
            rows += 1;
        }
        if rows != 5 {
            return Err(Error::Parse(format!("count table has {rows} rows, need five")));
        }
        Ok(CountTable { cells })
    }

    pub fn cells(&self) -> &[[u64; 5]; 5] {
        &self.cells
    }

    pub fn cell(&self, bacon: usize, eggs: usize) -> u64 {
        self.cells[bacon][eggs]
    }

    /// Total number of households.
    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }

    /// Households per bacon count.
    pub fn row_totals(&self) -> [u64; 5] {
        let mut totals = [0u64; 5];
        for (l, row) in self.cells.iter().enumerate() {
            totals[l] = row.iter().sum();
        }
        totals
    }

    /// Households per egg count.
    pub fn col_totals(&self) -> [u64; 5] {
        let mut totals = [0u64; 5];
        for row in &self.cells {
            for (j, &c) in row.iter().enumerate() {
                totals[j] += c;
            }
        }
        totals
    }
}

/// The bundled bacon-and-eggs purchase table (548 households).
pub fn bundled_purchase_table() -> CountTable {
    CountTable::from_text(include_str!("../data/bacon_eggs.txt")).expect("bundled table parses")
}

/// The bundled partially transposed variant of the purchase table.
pub fn bundled_transposed_purchase_table() -> CountTable {
    CountTable::from_text(include_str!("../data/bacon_eggs_transposed.txt"))
        .expect("bundled table parses")
}

/// Simulate one table: draw `(p_b, p_e)` per household from the
/// five-parameter model, then binomial purchase counts over `trips`
/// trips. `trips` must be 4 to fit the 5x5 table.
pub fn simulate_table(
    stream: &mut RngStream,
    params: &Bb5Params,
    households: u64,
    trips: u32,
) -> Result<CountTable> {
    if trips != TABLE_TRIALS {
        return Err(Error::InvalidParameter {
            what: "table trips (5x5 tables need 4)",
            value: trips as f64,
        });
    }
    if households == 0 {
        return Err(Error::InvalidParameter { what: "household count", value: 0.0 });
    }
    let mut cells = [[0u64; 5]; 5];
    for _ in 0..households {
        let (p_bacon, p_eggs) = sample_bb5(params, stream)?;
        let bacon = stream.draw_binomial(trips, p_bacon)?;
        let eggs = stream.draw_binomial(trips, p_eggs)?;
        cells[bacon as usize][eggs as usize] += 1;
    }
    Ok(CountTable { cells })
}

/// Cellwise L1 distance between two tables.
pub fn table_distance(a: &CountTable, b: &CountTable) -> u64 {
    let mut total = 0u64;
    for l in 0..5 {
        for j in 0..5 {
            total += a.cells[l][j].abs_diff(b.cells[l][j]);
        }
    }
    total
}

/// Reflect the egg axis: output cell `(l, j)` is input cell `(l, 4-j)`.
/// Bacon totals are preserved, egg totals reversed; applying it twice
/// returns the input.
pub fn partial_transpose(t: &CountTable) -> CountTable {
    let mut cells = [[0u64; 5]; 5];
    for (row, src) in cells.iter_mut().zip(&t.cells) {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = src[4 - j];
        }
    }
    CountTable { cells }
}

/// Pearson correlation of the disaggregated `(bacon count, egg count)`
/// household pairs implied by the table.
pub fn table_correlation(t: &CountTable) -> Result<f64> {
    let mut pairs = Vec::with_capacity(t.total() as usize);
    for l in 0..5 {
        for j in 0..5 {
            for _ in 0..t.cells[l][j] {
                pairs.push((l as f64, j as f64));
            }
        }
    }
    pearson(&pairs).ok_or(Error::Degenerate { what: "correlation of a table without variation" })
}

/// An empirical-Bayes prior: independent gamma components with unit
/// variance and the given means (`alpha_i ~ Gamma(mean_i^2, 1/mean_i)`),
/// chosen to imply a target model correlation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EbPriorSpec {
    prior_means: [f64; 5],
    target_correlation: f64,
}

impl EbPriorSpec {
    pub fn new(prior_means: [f64; 5], target_correlation: f64) -> Result<Self> {
        for &m in &prior_means {
            if !(m.is_finite() && m > 0.0) {
                return Err(Error::InvalidParameter { what: "prior mean", value: m });
            }
        }
        if !(-1.0..=1.0).contains(&target_correlation) {
            return Err(Error::InvalidParameter {
                what: "target correlation",
                value: target_correlation,
            });
        }
        Ok(EbPriorSpec { prior_means, target_correlation })
    }

    pub fn prior_means(&self) -> &[f64; 5] {
        &self.prior_means
    }

    pub fn target_correlation(&self) -> f64 {
        self.target_correlation
    }

    /// The implied independent gamma product prior.
    pub fn priors(&self) -> PriorProduct {
        let components = self
            .prior_means
            .iter()
            .map(|&m| Prior::gamma(m * m, 1.0 / m).expect("positive mean"))
            .collect();
        PriorProduct::new(components).expect("five components")
    }
}

/// The prior-mean vector tuned for the observed (positively dependent)
/// purchase table: model correlation close to +0.30.
pub fn positive_dependence_prior() -> EbPriorSpec {
    EbPriorSpec::new([1.6182, 1.9932, 0.1684, 0.1702, 3.1234], 0.30).expect("valid constants")
}

/// The prior-mean vector tuned for the partially transposed table:
/// model correlation close to -0.30.
pub fn negative_dependence_prior() -> EbPriorSpec {
    EbPriorSpec::new([0.9173, 1.7502, 0.8462, 1.1421, 0.4852], -0.30).expect("valid constants")
}

/// Diagnostics for a candidate prior-mean vector: how far its sums are
/// from the four marginal beta-binomial MLEs, and the model correlation
/// it implies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EbPriorScore {
    /// `(m1+m3 - a_b, m4+m5 - b_b, m2+m4 - a_e, m3+m5 - b_e)`.
    pub residuals: [f64; 4],
    /// Monte Carlo correlation of the model at the candidate means.
    pub mc_corr: f64,
}

/// Score a candidate prior-mean vector against marginal beta-binomial
/// MLEs `(a_b, b_b, a_e, b_e)` using `draws` Monte Carlo samples.
pub fn eb_prior_score(
    candidate_means: &[f64; 5],
    marginal_mles: &[f64; 4],
    draws: usize,
    rng: &mut RngStream,
) -> Result<EbPriorScore> {
    let m = candidate_means;
    let residuals = [
        m[0] + m[2] - marginal_mles[0],
        m[3] + m[4] - marginal_mles[1],
        m[1] + m[3] - marginal_mles[2],
        m[2] + m[4] - marginal_mles[3],
    ];
    let params = Bb5Params::new(*m)?;
    let mc_corr = mc_correlation(&params, draws, rng)?;
    Ok(EbPriorScore { residuals, mc_corr })
}

/// Which ABC engine drives a purchase-table run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineKind {
    AcceptReject,
    MetropolisHastings,
}

/// Knobs of a purchase-table run; `Default` gives the reference protocol
/// (500 acceptances, 15e6-proposal cap, 2e6 MH iterations with
/// componentwise proposal deviations (0.10, 0.10, 0.001, 0.001, 0.2),
/// and 1e6 draws for the posterior-mean correlation).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PurchaseRunConfig {
    pub acceptances: usize,
    pub proposal_cap: u64,
    pub mh_iterations: usize,
    pub mh_burn_in: f64,
    pub mh_proposal_sd: [f64; 5],
    pub correlation_draws: usize,
}

impl Default for PurchaseRunConfig {
    fn default() -> Self {
        PurchaseRunConfig {
            acceptances: 500,
            proposal_cap: 15_000_000,
            mh_iterations: 2_000_000,
            mh_burn_in: DEFAULT_BURN_IN_FRACTION,
            mh_proposal_sd: [0.10, 0.10, 0.001, 0.001, 0.2],
            correlation_draws: 1_000_000,
        }
    }
}

/// Posterior summary of a purchase-table run.
#[derive(Clone, Debug)]
pub struct PurchaseReport {
    pub engine: EngineKind,
    /// Posterior means of the five model components.
    pub alpha_mean: [f64; 5],
    /// Monte Carlo standard errors of those means: i.i.d. formula for
    /// accept-reject, batch means for the MH chain.
    pub alpha_mcse: [f64; 5],
    /// Derived marginal shapes `(a_b, b_b, a_e, b_e) =
    /// (a1+a3, a4+a5, a2+a4, a3+a5)` at the posterior mean.
    pub derived: [f64; 4],
    /// Model correlation at the posterior mean.
    pub correlation: f64,
    /// Cellwise average of the tables behind the acceptances (accepted
    /// proposals for AR; the held table per retained iteration for MH).
    pub mean_table: [[f64; 5]; 5],
    /// Proposals consumed (AR) or iterations run (MH).
    pub proposals_used: u64,
    /// Acceptances (AR) or accepted moves (MH).
    pub acceptances: usize,
    pub capped: bool,
    pub wall_time: Duration,
}

/// Cellwise mean of a set of tables.
pub fn mean_accepted_table(tables: &[CountTable]) -> Result<[[f64; 5]; 5]> {
    if tables.is_empty() {
        return Err(Error::EmptySample { what: "accepted table set" });
    }
    let mut mean = [[0.0f64; 5]; 5];
    for t in tables {
        for (mean_row, row) in mean.iter_mut().zip(&t.cells) {
            for (m, &c) in mean_row.iter_mut().zip(row) {
                *m += c as f64;
            }
        }
    }
    let n = tables.len() as f64;
    for row in &mut mean {
        for cell in row {
            *cell /= n;
        }
    }
    Ok(mean)
}

fn params_from_theta(theta: &[f64]) -> Result<Bb5Params> {
    if theta.len() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: theta.len() });
    }
    let mut a = [0.0; 5];
    a.copy_from_slice(theta);
    Bb5Params::new(a)
}

/// Fit the five-parameter model to an observed purchase table by ABC.
///
/// Accept-reject proposals use the family's stream addresses `0, 1, ...`;
/// the MH chain and the posterior-mean correlation use reserved high
/// addresses, so one family serves the whole run without collisions.
pub fn run_bacon_eggs(
    engine: EngineKind,
    observed: &CountTable,
    prior_spec: &EbPriorSpec,
    epsilon: f64,
    config: &PurchaseRunConfig,
    streams: StreamFamily,
) -> Result<PurchaseReport> {
    let households = observed.total();
    let prior = prior_spec.priors();
    let problem = AbcProblem::new(
        &prior,
        move |theta: &[f64], rng: &mut RngStream| {
            let params = params_from_theta(theta)?;
            simulate_table(rng, &params, households, TABLE_TRIALS)
        },
        |t: &CountTable| Ok(t.clone()),
        |a: &CountTable, b: &CountTable| Ok(table_distance(a, b) as f64),
        observed.clone(),
        epsilon,
    )?;

    let started = std::time::Instant::now();
    let (alpha_mean, alpha_mcse, mean_table, proposals_used, acceptances, capped) = match engine {
        EngineKind::AcceptReject => {
            let result = abc_ar(&problem, config.acceptances, config.proposal_cap, streams)?;
            let mean_vec = posterior_mean(&result.accepted)?;
            let mut mean = [0.0; 5];
            mean.copy_from_slice(&mean_vec);
            let mut mcse = [0.0; 5];
            for (i, slot) in mcse.iter_mut().enumerate() {
                let component: Vec<f64> = result.accepted.iter().map(|v| v[i]).collect();
                *slot = iid_mcse(&component)?;
            }
            let table = mean_accepted_table(&result.accepted_data)?;
            (mean, mcse, table, result.proposals_used, result.acceptances, result.capped)
        }
        EngineKind::MetropolisHastings => {
            let mh = MhConfig::new(
                prior.means(),
                config.mh_proposal_sd.to_vec(),
                config.mh_iterations,
                config.mh_burn_in,
            )?;
            let burn_in_states =
                (config.mh_burn_in * (config.mh_iterations + 1) as f64).floor() as usize;
            let mut chain_stream = streams.stream(MH_CHAIN_STREAM);
            let mut held: Option<CountTable> = None;
            let mut table_sum = [[0.0f64; 5]; 5];
            let mut table_count = 0u64;
            let chain = abc_mh_observed(
                &problem,
                &mh,
                &mut chain_stream,
                |iteration, _state, moved: Option<&CountTable>| {
                    if let Some(t) = moved {
                        held = Some(t.clone());
                    }
                    // State index iteration+1 is retained when past burn-in;
                    // holding times weight the table average automatically.
                    // Iterations before the first move hold no table and are
                    // skipped.
                    if iteration + 1 >= burn_in_states {
                        if let Some(t) = &held {
                            for (sum_row, row) in table_sum.iter_mut().zip(&t.cells) {
                                for (s, &c) in sum_row.iter_mut().zip(row) {
                                    *s += c as f64;
                                }
                            }
                            table_count += 1;
                        }
                    }
                },
            )?;
            if table_count == 0 {
                return Err(Error::Degenerate {
                    what: "chain accepted no move; no tables to average",
                });
            }
            for row in &mut table_sum {
                for cell in row {
                    *cell /= table_count as f64;
                }
            }
            let mean_vec = chain.posterior_mean();
            let mut mean = [0.0; 5];
            mean.copy_from_slice(&mean_vec);
            let mut mcse = [0.0; 5];
            for (i, slot) in mcse.iter_mut().enumerate() {
                *slot = chain.component_mcse(i)?;
            }
            (mean, mcse, table_sum, config.mh_iterations as u64, chain.moves(), false)
        }
    };

    let derived = [
        alpha_mean[0] + alpha_mean[2],
        alpha_mean[3] + alpha_mean[4],
        alpha_mean[1] + alpha_mean[3],
        alpha_mean[2] + alpha_mean[4],
    ];
    let posterior_params = Bb5Params::new(alpha_mean)?;
    let mut corr_stream = streams.stream(CORRELATION_STREAM);
    let correlation =
        mc_correlation(&posterior_params, config.correlation_draws, &mut corr_stream)?;

    Ok(PurchaseReport {
        engine,
        alpha_mean,
        alpha_mcse,
        derived,
        correlation,
        mean_table,
        proposals_used,
        acceptances,
        capped,
        wall_time: started.elapsed(),
    })
}
