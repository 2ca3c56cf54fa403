//! The bias/MSE simulation study and its report plumbing.
//!
//! A study fixes a true parameter vector, simulates many datasets from
//! it, estimates each one with accept-reject ABC (and with the
//! moment-modified likelihood closure when the model has five
//! parameters), and aggregates componentwise bias and mean squared
//! error. Stream addressing is fixed so that any rerun with the same
//! master seed reproduces the report bit for bit: dataset `j` is drawn
//! on substream `j`, and its ABC proposals live in the family based at
//! `j * 2^32`.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Deserialize;

use crate::abc::{abc_ar, posterior_mean, AbcProblem};
use crate::error::{Error, Result};
use crate::estimation::mmle5;
use crate::model::{named_setting, BivariateDataset, ModelParams};
use crate::numerics::{RngStream, StreamFamily};
use crate::priors::{named_prior, Prior, PriorProduct};
use crate::summaries::{l1_distance, summaries5, summaries8, SummaryVector};

pub const DEFAULT_DATASETS: usize = 200;
pub const DEFAULT_ACCEPTANCES: usize = 1000;
pub const DEFAULT_PROPOSAL_CAP: u64 = 15_000_000;
pub const DEFAULT_DATASET_SIZE: usize = 100;
pub const DEFAULT_EPSILON: f64 = 0.6;

/// Retries for the (probability ~zero) event that a simulated dataset
/// has a constant coordinate and cannot be summarized.
const MAX_DATA_RESAMPLES: u32 = 32;

/// A true parameter vector, either by registry name (`A1`..`A5`) or as
/// explicit components.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TruthSpec {
    Named(String),
    Values(Vec<f64>),
}

impl FromStr for TruthSpec {
    type Err = Error;

    /// A registry name, or comma-separated components.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if named_setting(s).is_some() {
            return Ok(TruthSpec::Named(s.to_string()));
        }
        let values: std::result::Result<Vec<f64>, _> =
            s.split(',').map(|t| t.trim().parse::<f64>()).collect();
        match values {
            Ok(v) if !v.is_empty() => Ok(TruthSpec::Values(v)),
            _ => Err(Error::Config(format!(
                "unknown truth '{s}' (use A1-A5 or comma-separated components)"
            ))),
        }
    }
}

/// Partial study settings, as read from a TOML file or from flags.
/// Unset fields fall back to the reference protocol defaults.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StudyOptions {
    pub model: Option<String>,
    pub truth: Option<TruthSpec>,
    pub prior: Option<String>,
    pub n: Option<usize>,
    pub epsilon: Option<f64>,
    pub datasets: Option<usize>,
    pub acceptances: Option<usize>,
    pub cap: Option<u64>,
    pub seed: Option<u64>,
}

impl StudyOptions {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Self::from_toml_str(&text)
    }

    /// Combine two option sets; fields set in `overrides` win.
    pub fn merged_with(self, overrides: StudyOptions) -> StudyOptions {
        StudyOptions {
            model: overrides.model.or(self.model),
            truth: overrides.truth.or(self.truth),
            prior: overrides.prior.or(self.prior),
            n: overrides.n.or(self.n),
            epsilon: overrides.epsilon.or(self.epsilon),
            datasets: overrides.datasets.or(self.datasets),
            acceptances: overrides.acceptances.or(self.acceptances),
            cap: overrides.cap.or(self.cap),
            seed: overrides.seed.or(self.seed),
        }
    }
}

/// A fully resolved study: truth, prior, sizes, tolerance, seed.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub truth: ModelParams,
    /// Scalar prior applied independently to every component.
    pub prior: Prior,
    /// Observations per dataset.
    pub n: usize,
    pub epsilon: f64,
    /// Number of simulated datasets.
    pub datasets: usize,
    pub target_acceptances: usize,
    pub proposal_cap: u64,
    pub master_seed: u64,
}

impl StudyConfig {
    /// Resolve names, apply defaults, and validate.
    pub fn from_options(options: StudyOptions) -> Result<Self> {
        let model_dim = match options.model.as_deref() {
            None => None,
            Some(m) if m.eq_ignore_ascii_case("bb5") => Some(5),
            Some(m) if m.eq_ignore_ascii_case("bb8") => Some(8),
            Some(other) => {
                return Err(Error::Config(format!("unknown model '{other}' (expected bb5 or bb8)")))
            }
        };
        let truth = match &options.truth {
            Some(TruthSpec::Named(name)) => named_setting(name)
                .ok_or_else(|| Error::Config(format!("unknown parameter setting '{name}'")))?,
            Some(TruthSpec::Values(v)) => ModelParams::from_slice(v)?,
            // Default truth follows the model: the five-parameter
            // reference setting, or the first eight-parameter one.
            None => match model_dim {
                Some(8) => named_setting("A4").expect("registry setting"),
                _ => named_setting("A1").expect("registry setting"),
            },
        };
        if let Some(dim) = model_dim {
            if dim != truth.dim() {
                return Err(Error::DimensionMismatch { expected: dim, got: truth.dim() });
            }
        }
        let prior = match &options.prior {
            Some(name) => name.parse::<Prior>()?,
            None => named_prior("G1").expect("registry prior"),
        };
        let config = StudyConfig {
            truth,
            prior,
            n: options.n.unwrap_or(DEFAULT_DATASET_SIZE),
            epsilon: options.epsilon.unwrap_or(DEFAULT_EPSILON),
            datasets: options.datasets.unwrap_or(DEFAULT_DATASETS),
            target_acceptances: options.acceptances.unwrap_or(DEFAULT_ACCEPTANCES),
            proposal_cap: options.cap.unwrap_or(DEFAULT_PROPOSAL_CAP),
            master_seed: options.seed.unwrap_or(0),
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!(
                "dataset size {} is too small; correlations need at least 2",
                self.n
            )));
        }
        if self.datasets == 0 {
            return Err(Error::Config("study needs at least one dataset".into()));
        }
        if self.target_acceptances == 0 {
            return Err(Error::Config("study needs at least one target acceptance".into()));
        }
        if self.proposal_cap == 0 {
            return Err(Error::Config("proposal cap must be positive".into()));
        }
        if self.epsilon.is_nan() || self.epsilon < 0.0 {
            return Err(Error::InvalidParameter { what: "tolerance epsilon", value: self.epsilon });
        }
        Ok(())
    }
}

/// Load an optional TOML file, apply flag overrides on top, resolve.
pub fn parse_config(file: Option<&Path>, overrides: StudyOptions) -> Result<StudyConfig> {
    let base = match file {
        Some(path) => StudyOptions::from_file(path)?,
        None => StudyOptions::default(),
    };
    StudyConfig::from_options(base.merged_with(overrides))
}

/// What one simulated dataset produced.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetOutcome {
    pub dataset_index: usize,
    /// Accept-reject posterior mean.
    pub abc_estimate: Vec<f64>,
    /// Moment-closure estimate; present only for five-parameter truths
    /// on which the closure succeeded.
    pub mmle_estimate: Option<Vec<f64>>,
    pub proposals_used: u64,
    pub capped: bool,
    /// Times the dataset was redrawn because a coordinate was constant.
    pub resamples: u32,
}

/// Aggregated study results plus the per-dataset estimates behind them.
#[derive(Clone, Debug, PartialEq)]
pub struct StudyReport {
    pub truth: Vec<f64>,
    pub epsilon: f64,
    pub outcomes: Vec<DatasetOutcome>,
    /// Datasets that produced no estimate at all, with the reason.
    pub failures: Vec<(usize, String)>,
    pub abc_bias: Vec<f64>,
    pub abc_mse: Vec<f64>,
    pub mmle_bias: Option<Vec<f64>>,
    pub mmle_mse: Option<Vec<f64>>,
    /// Five-parameter datasets on which the moment closure failed.
    pub mmle_failures: usize,
    pub proposals_mean: f64,
    /// Sample standard deviation of proposals over datasets (0 when
    /// fewer than two datasets succeeded).
    pub proposals_sd: f64,
    pub capped_runs: usize,
    pub datasets_run: usize,
}

fn summarize_for(dim: usize, data: &BivariateDataset) -> Result<SummaryVector> {
    if dim == 8 {
        summaries8(data)
    } else {
        summaries5(data)
    }
}

fn run_dataset(config: &StudyConfig, j: usize) -> Result<DatasetOutcome> {
    let dim = config.truth.dim();
    let data_streams = StreamFamily::new(config.master_seed, 0);
    let mut resamples = 0u32;
    let (dataset, observed) = loop {
        // Dataset j on substream j; the rare degenerate redraws live far
        // away, in the dataset's own proposal block with bit 31 set.
        let index = if resamples == 0 {
            j as u64
        } else {
            ((j as u64) << 32) + (1u64 << 31) + resamples as u64
        };
        let mut stream = data_streams.stream(index);
        let dataset = config.truth.as_model().sample_dataset(config.n, &mut stream)?;
        match summarize_for(dim, &dataset) {
            Ok(summary) => break (dataset, summary),
            Err(Error::Degenerate { .. }) if resamples < MAX_DATA_RESAMPLES => resamples += 1,
            Err(e) => return Err(e),
        }
    };

    let mmle_estimate = match &config.truth {
        ModelParams::Five(_) => mmle5(&dataset).ok().map(|r| r.alpha_hat.to_vec()),
        ModelParams::Eight(_) => None,
    };

    let prior = PriorProduct::iid(config.prior, dim)?;
    let n = config.n;
    let problem = AbcProblem::new(
        &prior,
        move |theta: &[f64], rng: &mut RngStream| {
            let params = ModelParams::from_slice(theta)?;
            params.as_model().sample_dataset(n, rng)
        },
        move |d: &BivariateDataset| summarize_for(dim, d),
        |a: &SummaryVector, b: &SummaryVector| l1_distance(a, b),
        observed,
        config.epsilon,
    )?;
    let proposals = StreamFamily::new(config.master_seed, (j as u64) << 32);
    let result = abc_ar(&problem, config.target_acceptances, config.proposal_cap, proposals)?;
    let abc_estimate = posterior_mean(&result.accepted)?;

    Ok(DatasetOutcome {
        dataset_index: j,
        abc_estimate,
        mmle_estimate,
        proposals_used: result.proposals_used,
        capped: result.capped,
        resamples,
    })
}

/// Run the whole study. Individual dataset failures are recorded in the
/// report, not fatal; only a study in which every dataset fails errors.
pub fn run_sim_study(config: &StudyConfig) -> Result<StudyReport> {
    config.validate()?;
    let results: Vec<(usize, Result<DatasetOutcome>)> =
        (0..config.datasets).into_par_iter().map(|j| (j, run_dataset(config, j))).collect();

    let mut outcomes = Vec::with_capacity(config.datasets);
    let mut failures = Vec::new();
    for (j, r) in results {
        match r {
            Ok(o) => outcomes.push(o),
            Err(e) => failures.push((j, e.to_string())),
        }
    }
    if outcomes.is_empty() {
        return Err(Error::EmptySample {
            what: "study estimates (every dataset failed; check tolerance and cap)",
        });
    }

    let dim = config.truth.dim();
    let truth = config.truth.params().to_vec();
    let count = outcomes.len() as f64;

    let mut abc_bias = vec![0.0; dim];
    let mut abc_mse = vec![0.0; dim];
    for o in &outcomes {
        for i in 0..dim {
            let e = o.abc_estimate[i] - truth[i];
            abc_bias[i] += e;
            abc_mse[i] += e * e;
        }
    }
    for v in abc_bias.iter_mut().chain(abc_mse.iter_mut()) {
        *v /= count;
    }

    let mmle_applicable = dim == 5;
    let mut mmle_bias = vec![0.0; dim];
    let mut mmle_mse = vec![0.0; dim];
    let mut mmle_count = 0usize;
    for o in &outcomes {
        if let Some(est) = &o.mmle_estimate {
            mmle_count += 1;
            for i in 0..dim {
                let e = est[i] - truth[i];
                mmle_bias[i] += e;
                mmle_mse[i] += e * e;
            }
        }
    }
    let (mmle_bias, mmle_mse) = if mmle_applicable && mmle_count > 0 {
        for v in mmle_bias.iter_mut().chain(mmle_mse.iter_mut()) {
            *v /= mmle_count as f64;
        }
        (Some(mmle_bias), Some(mmle_mse))
    } else {
        (None, None)
    };
    let mmle_failures = if mmle_applicable { outcomes.len() - mmle_count } else { 0 };

    let proposals: Vec<f64> = outcomes.iter().map(|o| o.proposals_used as f64).collect();
    let proposals_mean = proposals.iter().sum::<f64>() / count;
    let proposals_sd = if proposals.len() > 1 {
        (proposals.iter().map(|p| (p - proposals_mean) * (p - proposals_mean)).sum::<f64>()
            / (count - 1.0))
            .sqrt()
    } else {
        0.0
    };
    let capped_runs = outcomes.iter().filter(|o| o.capped).count();
    let datasets_run = outcomes.len();

    Ok(StudyReport {
        truth,
        epsilon: config.epsilon,
        outcomes,
        failures,
        abc_bias,
        abc_mse,
        mmle_bias,
        mmle_mse,
        mmle_failures,
        proposals_mean,
        proposals_sd,
        capped_runs,
        datasets_run,
    })
}

/// The summary-level numbers of a report (everything except the
/// per-dataset rows), as written to and read back from the summary CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportAggregates {
    pub truth: Vec<f64>,
    pub epsilon: f64,
    pub mmle_bias: Option<Vec<f64>>,
    pub mmle_mse: Option<Vec<f64>>,
    pub abc_bias: Vec<f64>,
    pub abc_mse: Vec<f64>,
    pub proposals_mean: f64,
    pub proposals_sd: f64,
    pub capped_runs: usize,
    pub datasets_run: usize,
    pub failed_datasets: usize,
    pub mmle_failures: usize,
}

impl StudyReport {
    pub fn aggregates(&self) -> ReportAggregates {
        ReportAggregates {
            truth: self.truth.clone(),
            epsilon: self.epsilon,
            mmle_bias: self.mmle_bias.clone(),
            mmle_mse: self.mmle_mse.clone(),
            abc_bias: self.abc_bias.clone(),
            abc_mse: self.abc_mse.clone(),
            proposals_mean: self.proposals_mean,
            proposals_sd: self.proposals_sd,
            capped_runs: self.capped_runs,
            datasets_run: self.datasets_run,
            failed_datasets: self.failures.len(),
            mmle_failures: self.mmle_failures,
        }
    }
}

/// One row of the per-dataset estimates CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateRow {
    pub dataset_index: usize,
    /// `MMLE` or `ABC`.
    pub method: String,
    pub estimate: Vec<f64>,
}

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Parse(format!("csv: {other:?}")),
    }
}

/// Shortest representation that parses back to the same bits.
fn num(x: f64) -> String {
    format!("{x}")
}

fn write_summary(report: &StudyReport, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    w.write_record(["component", "truth", "mmle_bias", "mmle_mse", "abc_bias", "abc_mse"])
        .map_err(csv_error)?;
    for i in 0..report.truth.len() {
        let mmle_bias = report.mmle_bias.as_ref().map(|v| num(v[i])).unwrap_or_default();
        let mmle_mse = report.mmle_mse.as_ref().map(|v| num(v[i])).unwrap_or_default();
        w.write_record([
            format!("alpha_{}", i + 1),
            num(report.truth[i]),
            mmle_bias,
            mmle_mse,
            num(report.abc_bias[i]),
            num(report.abc_mse[i]),
        ])
        .map_err(csv_error)?;
    }
    let blank = String::new();
    let mut meta = |name: &str, value: String| -> Result<()> {
        w.write_record([
            name.to_string(),
            value,
            blank.clone(),
            blank.clone(),
            blank.clone(),
            blank.clone(),
        ])
        .map_err(csv_error)
    };
    meta("epsilon", num(report.epsilon))?;
    meta("proposals_mean", num(report.proposals_mean))?;
    meta("proposals_sd", num(report.proposals_sd))?;
    meta("capped_runs", report.capped_runs.to_string())?;
    meta("datasets_run", report.datasets_run.to_string())?;
    meta("failed_datasets", report.failures.len().to_string())?;
    meta("mmle_failures", report.mmle_failures.to_string())?;
    w.flush()?;
    Ok(())
}

fn write_estimates(report: &StudyReport, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_error)?;
    let dim = report.truth.len();
    let mut header = vec!["dataset_index".to_string(), "method".to_string()];
    for i in 0..dim {
        header.push(format!("alpha_{}", i + 1));
    }
    w.write_record(&header).map_err(csv_error)?;
    for o in &report.outcomes {
        if let Some(est) = &o.mmle_estimate {
            let mut row = vec![o.dataset_index.to_string(), "MMLE".to_string()];
            row.extend(est.iter().map(|&x| num(x)));
            w.write_record(&row).map_err(csv_error)?;
        }
        let mut row = vec![o.dataset_index.to_string(), "ABC".to_string()];
        row.extend(o.abc_estimate.iter().map(|&x| num(x)));
        w.write_record(&row).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

/// Write `study_summary.csv` and `study_estimates.csv` under `out_dir`
/// (created if missing); returns the two paths.
pub fn emit_report(report: &StudyReport, out_dir: &Path) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(out_dir)?;
    let summary = out_dir.join("study_summary.csv");
    let estimates = out_dir.join("study_estimates.csv");
    write_summary(report, &summary)?;
    write_estimates(report, &estimates)?;
    Ok((summary, estimates))
}

fn parse_cell<T: FromStr>(record: &csv::StringRecord, col: usize, what: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    record
        .get(col)
        .ok_or_else(|| Error::Parse(format!("{what}: missing column {col}")))?
        .parse::<T>()
        .map_err(|e| Error::Parse(format!("{what}: {e}")))
}

/// Read back the aggregates written by [`emit_report`].
pub fn read_report_aggregates(summary_path: &Path) -> Result<ReportAggregates> {
    let mut r = csv::Reader::from_path(summary_path).map_err(csv_error)?;
    let mut truth = Vec::new();
    let mut mmle_bias: Vec<f64> = Vec::new();
    let mut mmle_mse: Vec<f64> = Vec::new();
    let mut mmle_present = true;
    let mut abc_bias = Vec::new();
    let mut abc_mse = Vec::new();
    let mut epsilon = f64::NAN;
    let mut proposals_mean = f64::NAN;
    let mut proposals_sd = f64::NAN;
    let mut capped_runs = 0usize;
    let mut datasets_run = 0usize;
    let mut failed_datasets = 0usize;
    let mut mmle_failures = 0usize;
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let name = record.get(0).unwrap_or_default().to_string();
        if name.starts_with("alpha_") {
            truth.push(parse_cell::<f64>(&record, 1, "truth")?);
            let bias = record.get(2).unwrap_or_default();
            if bias.is_empty() {
                mmle_present = false;
            } else {
                mmle_bias.push(parse_cell::<f64>(&record, 2, "mmle_bias")?);
                mmle_mse.push(parse_cell::<f64>(&record, 3, "mmle_mse")?);
            }
            abc_bias.push(parse_cell::<f64>(&record, 4, "abc_bias")?);
            abc_mse.push(parse_cell::<f64>(&record, 5, "abc_mse")?);
        } else {
            match name.as_str() {
                "epsilon" => epsilon = parse_cell(&record, 1, "epsilon")?,
                "proposals_mean" => proposals_mean = parse_cell(&record, 1, "proposals_mean")?,
                "proposals_sd" => proposals_sd = parse_cell(&record, 1, "proposals_sd")?,
                "capped_runs" => capped_runs = parse_cell(&record, 1, "capped_runs")?,
                "datasets_run" => datasets_run = parse_cell(&record, 1, "datasets_run")?,
                "failed_datasets" => failed_datasets = parse_cell(&record, 1, "failed_datasets")?,
                "mmle_failures" => mmle_failures = parse_cell(&record, 1, "mmle_failures")?,
                other => return Err(Error::Parse(format!("unknown summary row '{other}'"))),
            }
        }
    }
    if truth.is_empty() {
        return Err(Error::Parse("summary has no component rows".into()));
    }
    Ok(ReportAggregates {
        truth,
        epsilon,
        mmle_bias: mmle_present.then_some(mmle_bias),
        mmle_mse: mmle_present.then_some(mmle_mse),
        abc_bias,
        abc_mse,
        proposals_mean,
        proposals_sd,
        capped_runs,
        datasets_run,
        failed_datasets,
        mmle_failures,
    })
}

/// Read back the per-dataset rows written by [`emit_report`].
pub fn read_estimates(estimates_path: &Path) -> Result<Vec<EstimateRow>> {
    let mut r = csv::Reader::from_path(estimates_path).map_err(csv_error)?;
    let mut rows = Vec::new();
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let dataset_index = parse_cell::<usize>(&record, 0, "dataset_index")?;
        let method = record
            .get(1)
            .ok_or_else(|| Error::Parse("estimates row is missing the method".into()))?
            .to_string();
        let mut estimate = Vec::with_capacity(record.len() - 2);
        for col in 2..record.len() {
            estimate.push(parse_cell::<f64>(&record, col, "estimate")?);
        }
        rows.push(EstimateRow { dataset_index, method, estimate });
    }
    Ok(rows)
}
