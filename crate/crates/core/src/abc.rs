//! Likelihood-free inference engines: accept-reject (AR) and random-walk
//! Metropolis-Hastings (MH), generic over the model being fit.
//!
//! A problem bundles a joint prior, a simulator, a summary map, a
//! distance, the observed summary, and a tolerance. The AR engine draws
//! parameters from the prior and keeps those whose simulated data land
//! within tolerance of the observed summary; the MH engine walks a chain
//! whose moves are accepted with probability
//! `min{1, prior ratio} * 1[distance < epsilon]`.
//!
//! Reproducibility contract: AR proposal `i` always reads stream
//! `family.stream(i)` and acceptances are collected in index order, so a
//! run is bit-identical for a fixed master seed no matter how many
//! threads execute it. The MH chain is a single sequential stream.
//!
//! Simulation or summary failures (degenerate draws, underflow) reject
//! the proposal rather than aborting: a parameter whose data cannot even
//! be summarized cannot match the observed summary.

use std::marker::PhantomData;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{RngStream, StreamFamily};
use crate::priors::PriorProduct;

/// Default fraction of an MH chain discarded before posterior summaries.
pub const DEFAULT_BURN_IN_FRACTION: f64 = 0.1;

/// A joint prior over a parameter vector, as the engines see it.
pub trait JointPrior: Sync {
    fn dim(&self) -> usize;
    fn sample(&self, rng: &mut RngStream) -> Result<Vec<f64>>;
    /// Joint log density; `-inf` outside the support.
    fn log_pdf(&self, theta: &[f64]) -> Result<f64>;
}

impl JointPrior for PriorProduct {
    fn dim(&self) -> usize {
        self.dim()
    }

    fn sample(&self, rng: &mut RngStream) -> Result<Vec<f64>> {
        self.product_sample(rng)
    }

    fn log_pdf(&self, theta: &[f64]) -> Result<f64> {
        self.product_log_pdf(theta)
    }
}

/// Everything the engines need to know about one inference task.
///
/// `simulate` receives the proposed parameter vector and the proposal's
/// own random stream (already advanced past the prior draw); `distance`
/// receives the simulated summary first and the observed summary second.
pub struct AbcProblem<'a, D, S, Sim, Sum, Dist> {
    prior: &'a dyn JointPrior,
    simulate: Sim,
    summarize: Sum,
    distance: Dist,
    observed_summary: S,
    epsilon: f64,
    _data: PhantomData<fn() -> D>,
}

impl<'a, D, S, Sim, Sum, Dist> AbcProblem<'a, D, S, Sim, Sum, Dist>
where
    Sim: Fn(&[f64], &mut RngStream) -> Result<D> + Sync,
    Sum: Fn(&D) -> Result<S> + Sync,
    Dist: Fn(&S, &S) -> Result<f64> + Sync,
    S: Sync,
{
    /// Bundle a problem. The tolerance may be any nonnegative value
    /// including infinity (accept everything); zero accepts nothing on
    /// continuous summaries because the comparison is strict.
    pub fn new(
        prior: &'a dyn JointPrior,
        simulate: Sim,
        summarize: Sum,
        distance: Dist,
        observed_summary: S,
        epsilon: f64,
    ) -> Result<Self> {
        if epsilon.is_nan() || epsilon < 0.0 {
            return Err(Error::InvalidParameter { what: "tolerance epsilon", value: epsilon });
        }
        Ok(AbcProblem {
            prior,
            simulate,
            summarize,
            distance,
            observed_summary,
            epsilon,
            _data: PhantomData,
        })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn prior(&self) -> &dyn JointPrior {
        self.prior
    }

    /// Evaluate one prior proposal on its own stream. `None` means
    /// rejected, whether by distance or because simulation/summarization
    /// failed.
    fn evaluate(&self, stream: &mut RngStream) -> Option<(Vec<f64>, D)> {
        let theta = self.prior.sample(stream).ok()?;
        let data = (self.simulate)(&theta, stream).ok()?;
        let summary = (self.summarize)(&data).ok()?;
        let rho = (self.distance)(&summary, &self.observed_summary).ok()?;
        (rho < self.epsilon).then_some((theta, data))
    }
}

/// Outcome of an accept-reject run.
#[derive(Clone, Debug)]
pub struct AbcResult<D> {
    /// Accepted parameter vectors, in proposal-index order.
    pub accepted: Vec<Vec<f64>>,
    /// The simulated dataset behind each acceptance, aligned with
    /// `accepted`.
    pub accepted_data: Vec<D>,
    /// Proposal indices of the acceptances (substream addresses).
    pub accepted_indices: Vec<u64>,
    /// Proposals consumed up to and including the final acceptance (or up
    /// to the cap).
    pub proposals_used: u64,
    /// Number of acceptances; equals `accepted.len()`.
    pub acceptances: usize,
    /// True when the proposal budget ran out before the target.
    pub capped: bool,
    pub wall_time: Duration,
}

/// Accept-reject ABC: draw from the prior, keep parameters whose
/// simulated data fall within tolerance, until `target` acceptances or
/// `proposal_cap` proposals, whichever comes first.
///
/// Proposal `i` uses `streams.stream(i)`; results are identical for any
/// worker count.
pub fn abc_ar<D, S, Sim, Sum, Dist>(
    problem: &AbcProblem<'_, D, S, Sim, Sum, Dist>,
    target: usize,
    proposal_cap: u64,
    streams: StreamFamily,
) -> Result<AbcResult<D>>
where
    Sim: Fn(&[f64], &mut RngStream) -> Result<D> + Sync,
    Sum: Fn(&D) -> Result<S> + Sync,
    Dist: Fn(&S, &S) -> Result<f64> + Sync,
    S: Sync,
    D: Send,
{
    if target == 0 {
        return Err(Error::Config(
            "accept-reject needs a target of at least one acceptance".into(),
        ));
    }
    let start = Instant::now();
    let mut accepted: Vec<Vec<f64>> = Vec::with_capacity(target);
    let mut accepted_data: Vec<D> = Vec::with_capacity(target);
    let mut accepted_indices: Vec<u64> = Vec::with_capacity(target);
    let mut next: u64 = 0;
    let mut used: u64 = 0;
    'scan: while accepted.len() < target && next < proposal_cap {
        // Guess how many proposals are still needed from the acceptance
        // rate so far; the guess only affects batching, never results.
        let rate = (accepted.len() as f64 + 1.0) / (used as f64 + 1.0);
        let missing = (target - accepted.len()) as f64;
        let chunk =
            ((missing / rate * 1.25).ceil() as u64).clamp(64, 8192).min(proposal_cap - next);
        let results: Vec<Option<(Vec<f64>, D)>> = (0..chunk as usize)
            .into_par_iter()
            .map(|offset| {
                let mut stream = streams.stream(next + offset as u64);
                problem.evaluate(&mut stream)
            })
            .collect();
        for (offset, outcome) in results.into_iter().enumerate() {
            used += 1;
            if let Some((theta, data)) = outcome {
                accepted.push(theta);
                accepted_data.push(data);
                accepted_indices.push(next + offset as u64);
                if accepted.len() == target {
                    break 'scan;
                }
            }
        }
        next += chunk;
    }
    let acceptances = accepted.len();
    Ok(AbcResult {
        accepted,
        accepted_data,
        accepted_indices,
        proposals_used: used,
        acceptances,
        capped: acceptances < target,
        wall_time: start.elapsed(),
    })
}

/// Configuration of a Metropolis-Hastings run.
#[derive(Clone, Debug, PartialEq)]
pub struct MhConfig {
    pub initial_state: Vec<f64>,
    /// Per-component proposal standard deviations.
    pub proposal_sd: Vec<f64>,
    pub iterations: usize,
    /// Fraction of the chain (including the initial state) discarded by
    /// the posterior-summary accessors.
    pub burn_in_fraction: f64,
}

impl MhConfig {
    pub fn new(
        initial_state: Vec<f64>,
        proposal_sd: Vec<f64>,
        iterations: usize,
        burn_in_fraction: f64,
    ) -> Result<Self> {
        if initial_state.len() != proposal_sd.len() {
            return Err(Error::DimensionMismatch {
                expected: initial_state.len(),
                got: proposal_sd.len(),
            });
        }
        if iterations == 0 {
            return Err(Error::Config("chain needs at least one iteration".into()));
        }
        if !(0.0..1.0).contains(&burn_in_fraction) {
            return Err(Error::InvalidParameter {
                what: "burn-in fraction",
                value: burn_in_fraction,
            });
        }
        for &sd in &proposal_sd {
            if !(sd.is_finite() && sd > 0.0) {
                return Err(Error::InvalidParameter {
                    what: "proposal standard deviation",
                    value: sd,
                });
            }
        }
        Ok(MhConfig { initial_state, proposal_sd, iterations, burn_in_fraction })
    }

    /// Start the chain at the prior componentwise means with the default
    /// burn-in fraction.
    pub fn from_prior_means(
        prior: &PriorProduct,
        proposal_sd: Vec<f64>,
        iterations: usize,
    ) -> Result<Self> {
        Self::new(prior.means(), proposal_sd, iterations, DEFAULT_BURN_IN_FRACTION)
    }
}

/// A Metropolis-Hastings chain, stored flat (`dim` consecutive values per
/// state) to keep multi-million-iteration runs cheap.
#[derive(Clone, Debug)]
pub struct MhChain {
    dim: usize,
    states: Vec<f64>,
    moves: usize,
    burn_in_states: usize,
}

impl MhChain {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored states (iterations + 1, counting the start).
    pub fn len(&self) -> usize {
        self.states.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn state(&self, i: usize) -> &[f64] {
        &self.states[i * self.dim..(i + 1) * self.dim]
    }

    /// Number of accepted moves over the whole chain.
    pub fn moves(&self) -> usize {
        self.moves
    }

    /// How many leading states the summaries discard.
    pub fn burn_in_states(&self) -> usize {
        self.burn_in_states
    }

    pub fn retained_len(&self) -> usize {
        self.len() - self.burn_in_states
    }

    pub fn retained_states(&self) -> impl Iterator<Item = &[f64]> {
        (self.burn_in_states..self.len()).map(|i| self.state(i))
    }

    /// One component of the post-burn-in chain, as a contiguous vector.
    pub fn retained_component(&self, component: usize) -> Vec<f64> {
        self.retained_states().map(|s| s[component]).collect()
    }

    /// Componentwise mean over the post-burn-in states.
    pub fn posterior_mean(&self) -> Vec<f64> {
        let mut mean = vec![0.0; self.dim];
        let mut count = 0usize;
        for s in self.retained_states() {
            for (m, x) in mean.iter_mut().zip(s) {
                *m += x;
            }
            count += 1;
        }
        for m in &mut mean {
            *m /= count as f64;
        }
        mean
    }

    /// Batch-means Monte Carlo standard error of one component's
    /// post-burn-in mean, using floor(sqrt(length)) batches.
    pub fn component_mcse(&self, component: usize) -> Result<f64> {
        let values = self.retained_component(component);
        let batches = (values.len() as f64).sqrt().floor() as usize;
        mcse_batch_means(&values, batches)
    }
}

/// Metropolis-Hastings ABC with an observer called after every iteration.
///
/// The observer receives the iteration number, the state after the step,
/// and the newly accepted dataset when the step moved (callers can track
/// quantities of the simulated data, e.g. running mean tables, without
/// the engine storing every dataset).
pub fn abc_mh_observed<D, S, Sim, Sum, Dist, Obs>(
    problem: &AbcProblem<'_, D, S, Sim, Sum, Dist>,
    config: &MhConfig,
    stream: &mut RngStream,
    mut on_step: Obs,
) -> Result<MhChain>
where
    Sim: Fn(&[f64], &mut RngStream) -> Result<D> + Sync,
    Sum: Fn(&D) -> Result<S> + Sync,
    Dist: Fn(&S, &S) -> Result<f64> + Sync,
    S: Sync,
    Obs: FnMut(usize, &[f64], Option<&D>),
{
    let dim = problem.prior.dim();
    if config.initial_state.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: config.initial_state.len() });
    }
    let mut state = config.initial_state.clone();
    let mut state_log_prior = problem.prior.log_pdf(&state)?;
    if state_log_prior == f64::NEG_INFINITY {
        return Err(Error::Config("chain start has zero prior density".into()));
    }
    let total_states = config.iterations + 1;
    let mut states = Vec::with_capacity(total_states * dim);
    states.extend_from_slice(&state);
    let mut moves = 0usize;
    let mut proposal = vec![0.0; dim];
    for iteration in 0..config.iterations {
        for (p, (&s, &sd)) in proposal.iter_mut().zip(state.iter().zip(&config.proposal_sd)) {
            *p = stream.normal(s, sd);
        }
        let proposal_log_prior = problem.prior.log_pdf(&proposal)?;
        let mut moved: Option<D> = None;
        // A proposal outside the prior support is rejected without
        // spending any simulation effort (or stream state) on it.
        if proposal_log_prior > f64::NEG_INFINITY {
            let within = match (problem.simulate)(&proposal, stream) {
                Ok(data) => match (problem.summarize)(&data)
                    .and_then(|s| (problem.distance)(&s, &problem.observed_summary))
                {
                    Ok(rho) => (rho < problem.epsilon).then_some(data),
                    Err(_) => None,
                },
                Err(_) => None,
            };
            if let Some(data) = within {
                let u = stream.open01();
                if u.ln() < proposal_log_prior - state_log_prior {
                    state.copy_from_slice(&proposal);
                    state_log_prior = proposal_log_prior;
                    moves += 1;
                    moved = Some(data);
                }
            }
        }
        states.extend_from_slice(&state);
        on_step(iteration, &state, moved.as_ref());
    }
    let burn_in_states = (config.burn_in_fraction * total_states as f64).floor() as usize;
    Ok(MhChain { dim, states, moves, burn_in_states })
}

/// Metropolis-Hastings ABC (no observer).
pub fn abc_mh<D, S, Sim, Sum, Dist>(
    problem: &AbcProblem<'_, D, S, Sim, Sum, Dist>,
    config: &MhConfig,
    stream: &mut RngStream,
) -> Result<MhChain>
where
    Sim: Fn(&[f64], &mut RngStream) -> Result<D> + Sync,
    Sum: Fn(&D) -> Result<S> + Sync,
    Dist: Fn(&S, &S) -> Result<f64> + Sync,
    S: Sync,
{
    abc_mh_observed(problem, config, stream, |_, _, _: Option<&D>| {})
}

/// Componentwise mean of a set of parameter vectors.
pub fn posterior_mean(accepted: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = accepted.first().ok_or(Error::EmptySample { what: "accepted parameter set" })?;
    let dim = first.len();
    let mut mean = vec![0.0; dim];
    for v in accepted {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: v.len() });
        }
        for (m, x) in mean.iter_mut().zip(v) {
            *m += x;
        }
    }
    for m in &mut mean {
        *m /= accepted.len() as f64;
    }
    Ok(mean)
}

/// Batch-means Monte Carlo standard error of the mean of a (possibly
/// autocorrelated) scalar chain: split into `batches` equal batches,
/// take the standard deviation of the batch means over sqrt(batches).
/// Trailing values that do not fill a batch are ignored.
pub fn mcse_batch_means(chain: &[f64], batches: usize) -> Result<f64> {
    if batches < 2 || chain.len() < 2 * batches {
        return Err(Error::ChainTooShort { len: chain.len(), batches });
    }
    let batch_len = chain.len() / batches;
    let used = &chain[..batches * batch_len];
    let grand = used.iter().sum::<f64>() / used.len() as f64;
    let mut ss = 0.0;
    for j in 0..batches {
        let batch = &used[j * batch_len..(j + 1) * batch_len];
        let mean = batch.iter().sum::<f64>() / batch_len as f64;
        ss += (mean - grand) * (mean - grand);
    }
    Ok((ss / (batches * (batches - 1)) as f64).sqrt())
}

/// Standard error of the mean of independent draws: sample standard
/// deviation (n-1 denominator) over sqrt(n). The right uncertainty for
/// accept-reject output, which is i.i.d.
pub fn iid_mcse(values: &[f64]) -> Result<f64> {
    if values.len() < 2 {
        return Err(Error::EmptySample { what: "standard error of fewer than two values" });
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    Ok((var / n).sqrt())
}
