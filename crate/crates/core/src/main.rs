//! Command-line front end: dataset simulation, point estimation, the two
//! ABC engines, the bias/MSE study, and the purchase-table application.

use std::fs;
use std::io::{self, Write as _};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use bivbeta::abc::{abc_ar, abc_mh, iid_mcse, posterior_mean, AbcProblem, MhConfig};
use bivbeta::betabinom::{
    bundled_purchase_table, partial_transpose, run_bacon_eggs, CountTable, EbPriorSpec, EngineKind,
    PurchaseReport, PurchaseRunConfig,
};
use bivbeta::error::{Error, Result};
use bivbeta::estimation::{marginal_mles, mmle5};
use bivbeta::model::{BivariateDataset, ModelParams};
use bivbeta::numerics::{RngStream, StreamFamily};
use bivbeta::priors::PriorProduct;
use bivbeta::study::{
    emit_report, parse_config, run_sim_study, StudyConfig, StudyOptions, StudyReport,
};
use bivbeta::summaries::{l1_distance, legacy_moment_stat, summaries5, summaries8, SummaryVector};

#[derive(Parser)]
#[command(
    name = "bivbeta",
    version,
    about = "Bivariate beta simulation, estimation, and ABC inference"
)]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw pairs from a bivariate beta and write them as CSV.
    Simulate(SimulateArgs),
    /// Modified maximum likelihood estimate from a dataset CSV.
    Mmle(MmleArgs),
    /// Accept-reject ABC posterior for a dataset CSV.
    AbcAr(AbcArArgs),
    /// Metropolis-Hastings ABC posterior for a dataset CSV.
    AbcMh(AbcMhArgs),
    /// Bias/MSE simulation study over many synthetic datasets.
    Study(StudyArgs),
    /// Fit the grocery purchase table (bundled by default).
    BaconEggs(BaconEggsArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Model family, bb5 or bb8 (inferred from --truth when omitted).
    #[arg(long)]
    model: Option<String>,
    /// Parameters: a named setting (A1..A5) or comma-separated values.
    #[arg(long)]
    truth: Option<String>,
    /// Number of pairs.
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MmleArgs {
    /// Dataset CSV with z1,z2 rows (header optional).
    #[arg(long)]
    data: PathBuf,
    /// Optional one-row CSV of the estimate.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AbcArArgs {
    /// Dataset CSV with z1,z2 rows (header optional).
    #[arg(long)]
    data: PathBuf,
    /// Model family to fit, bb5 or bb8.
    #[arg(long, default_value = "bb5")]
    model: String,
    /// Prior for every component: G1, G2, U1, U2, gamma(s,s), moduniform(m,p).
    #[arg(long, default_value = "G1")]
    prior: String,
    #[arg(long, default_value_t = 0.6)]
    eps: f64,
    #[arg(long, default_value_t = 1000)]
    acceptances: usize,
    #[arg(long, default_value_t = 15_000_000)]
    cap: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional CSV of the accepted parameter vectors.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AbcMhArgs {
    /// Dataset CSV with z1,z2 rows (header optional).
    #[arg(long)]
    data: PathBuf,
    /// Model family to fit, bb5 or bb8.
    #[arg(long, default_value = "bb5")]
    model: String,
    /// Prior for every component: G1, G2, U1, U2, gamma(s,s), moduniform(m,p).
    #[arg(long, default_value = "G1")]
    prior: String,
    #[arg(long, default_value_t = 0.6)]
    eps: f64,
    #[arg(long, default_value_t = 100_000)]
    iterations: usize,
    /// Proposal standard deviation: one value, or one per component.
    #[arg(long, default_value = "0.1")]
    proposal_sd: String,
    /// Fraction of the chain discarded before summarizing.
    #[arg(long, default_value_t = 0.1)]
    burn_in: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional CSV of the retained chain states.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StudyArgs {
    /// TOML file with study settings; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    truth: Option<String>,
    #[arg(long)]
    prior: Option<String>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    datasets: Option<usize>,
    #[arg(long)]
    acceptances: Option<usize>,
    #[arg(long)]
    cap: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for study_summary.csv and study_estimates.csv.
    #[arg(long, default_value = "study_out")]
    out: PathBuf,
}

#[derive(Args)]
struct BaconEggsArgs {
    /// Inference engine: ar (accept-reject) or mh (Metropolis-Hastings).
    #[arg(long, default_value = "ar")]
    engine: String,
    /// Custom observed table (5x5 whitespace grid); bundled when omitted.
    #[arg(long)]
    data: Option<PathBuf>,
    /// Analyze the egg-reflected variant of the observed table.
    #[arg(long)]
    transposed: bool,
    /// Five comma-separated prior means (unit-variance gamma components).
    #[arg(long)]
    prior_means: Option<String>,
    /// Correlation the prior means were tuned for (defaults to +/-0.30).
    #[arg(long)]
    target_corr: Option<f64>,
    #[arg(long, default_value_t = 100.0)]
    eps: f64,
    #[arg(long, default_value_t = 500)]
    acceptances: usize,
    #[arg(long, default_value_t = 15_000_000)]
    cap: u64,
    /// Chain length for the mh engine.
    #[arg(long, default_value_t = 2_000_000)]
    iterations: usize,
    /// Burn-in fraction for the mh engine.
    #[arg(long, default_value_t = 0.1)]
    burn_in: f64,
    /// Five comma-separated proposal standard deviations (mh engine).
    #[arg(long, default_value = "0.10,0.10,0.001,0.001,0.2")]
    proposal_sd: String,
    /// Draws behind the posterior-mean correlation estimate.
    #[arg(long, default_value_t = 1_000_000)]
    correlation_draws: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Optional CSV report.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(workers) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    }
    match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Mmle(args) => mmle(args),
        Command::AbcAr(args) => abc_ar_cmd(args),
        Command::AbcMh(args) => abc_mh_cmd(args),
        Command::Study(args) => study(args),
        Command::BaconEggs(args) => bacon_eggs(args),
    }
}

/// Resolve --model/--truth the same way the study does, then keep only
/// the parameter vector.
fn resolve_params(model: Option<String>, truth: Option<String>) -> Result<ModelParams> {
    let options = StudyOptions {
        model,
        truth: truth.as_deref().map(str::parse).transpose()?,
        ..StudyOptions::default()
    };
    Ok(StudyConfig::from_options(options)?.truth)
}

/// Read a dataset of z1,z2 pairs; a non-numeric first line is treated as
/// a header, `#` lines and blank lines are skipped.
fn read_dataset(path: &Path) -> Result<BivariateDataset> {
    let text = fs::read_to_string(path)?;
    let mut pairs = Vec::new();
    let mut first_content_line = true;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let z1 = fields.next().map(str::parse::<f64>);
        let z2 = fields.next().map(str::parse::<f64>);
        match (z1, z2) {
            (Some(Ok(z1)), Some(Ok(z2))) => pairs.push((z1, z2)),
            _ if first_content_line => {} // header row
            _ => return Err(Error::Parse(format!("bad dataset line '{line}'"))),
        }
        first_content_line = false;
    }
    BivariateDataset::new(pairs)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::Parse(format!("csv: {e}")))
}

fn write_record<W: io::Write, I, S>(w: &mut csv::Writer<W>, record: I) -> Result<()>
where
    I: IntoIterator<Item = S>,
    S: AsRef<[u8]>,
{
    w.write_record(record).map_err(|e| Error::Parse(format!("csv: {e}")))
}

fn component_labels(dim: usize) -> Vec<String> {
    (1..=dim).map(|i| format!("alpha_{i}")).collect()
}

fn joined(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(", ")
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let params = resolve_params(args.model, args.truth)?;
    let mut rng = RngStream::substream(args.seed, 0);
    let data = params.as_model().sample_dataset(args.n, &mut rng)?;
    let mut out: Box<dyn io::Write> = match &args.out {
        Some(path) => Box::new(fs::File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(out, "z1,z2")?;
    for (z1, z2) in data.pairs() {
        writeln!(out, "{z1},{z2}")?;
    }
    out.flush()?;
    Ok(())
}

fn mmle(args: MmleArgs) -> Result<()> {
    let data = read_dataset(&args.data)?;
    let marginals = marginal_mles(&data)?;
    let stat = legacy_moment_stat(&data);
    let fit = mmle5(&data)?;
    println!("n = {}", data.len());
    println!(
        "marginal_mles = a={:.6}, b={:.6}, c={:.6}, d={:.6}",
        marginals.a_hat, marginals.b_hat, marginals.c_hat, marginals.d_hat
    );
    println!("cross_moment_stat = {stat:.6}");
    for (label, value) in component_labels(5).iter().zip(fit.alpha_hat) {
        println!("{label} = {value:.6}");
    }
    println!("quadratic_b = {:.6}", fit.quadratic_b);
    println!("quadratic_c = {:.6}", fit.quadratic_c);
    let clipped: Vec<String> = fit
        .clipped
        .iter()
        .enumerate()
        .filter(|(_, &c)| c)
        .map(|(i, _)| format!("alpha_{}", i + 1))
        .collect();
    println!("clipped = {}", if clipped.is_empty() { "none".into() } else { clipped.join(",") });
    if let Some(path) = &args.out {
        let mut w = csv_writer(path)?;
        write_record(&mut w, component_labels(5))?;
        write_record(&mut w, fit.alpha_hat.iter().map(|v| format!("{v}")))?;
        w.flush()?;
    }
    Ok(())
}

fn summarize_for(dim: usize, data: &BivariateDataset) -> Result<SummaryVector> {
    if dim == 8 {
        summaries8(data)
    } else {
        summaries5(data)
    }
}

fn abc_ar_cmd(args: AbcArArgs) -> Result<()> {
    let params = resolve_params(Some(args.model), None)?;
    let dim = params.dim();
    let data = read_dataset(&args.data)?;
    let observed = summarize_for(dim, &data)?;
    let prior = PriorProduct::iid(args.prior.parse()?, dim)?;
    let n = data.len();
    let problem = AbcProblem::new(
        &prior,
        move |theta: &[f64], rng: &mut RngStream| {
            ModelParams::from_slice(theta)?.as_model().sample_dataset(n, rng)
        },
        move |d: &BivariateDataset| summarize_for(dim, d),
        |a: &SummaryVector, b: &SummaryVector| l1_distance(a, b),
        observed,
        args.eps,
    )?;
    let result = abc_ar(&problem, args.acceptances, args.cap, StreamFamily::new(args.seed, 0))?;
    let mean = posterior_mean(&result.accepted)?;
    println!("acceptances = {}", result.acceptances);
    println!("proposals_used = {}", result.proposals_used);
    println!("capped = {}", result.capped);
    println!("posterior_mean = {}", joined(&mean));
    let mut mcses = Vec::with_capacity(dim);
    for i in 0..dim {
        let component: Vec<f64> = result.accepted.iter().map(|v| v[i]).collect();
        mcses.push(iid_mcse(&component)?);
    }
    println!("posterior_mcse = {}", joined(&mcses));
    println!("wall_time_s = {:.3}", result.wall_time.as_secs_f64());
    if let Some(path) = &args.out {
        let mut w = csv_writer(path)?;
        write_record(&mut w, component_labels(dim))?;
        for theta in &result.accepted {
            write_record(&mut w, theta.iter().map(|v| format!("{v}")))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn parse_sd_list(text: &str, dim: usize) -> Result<Vec<f64>> {
    let values: std::result::Result<Vec<f64>, _> =
        text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| Error::Config(format!("bad proposal sd '{text}': {e}")))?;
    match values.len() {
        1 => Ok(vec![values[0]; dim]),
        len if len == dim => Ok(values),
        len => Err(Error::DimensionMismatch { expected: dim, got: len }),
    }
}

fn abc_mh_cmd(args: AbcMhArgs) -> Result<()> {
    let params = resolve_params(Some(args.model), None)?;
    let dim = params.dim();
    let data = read_dataset(&args.data)?;
    let observed = summarize_for(dim, &data)?;
    let prior = PriorProduct::iid(args.prior.parse()?, dim)?;
    let n = data.len();
    let problem = AbcProblem::new(
        &prior,
        move |theta: &[f64], rng: &mut RngStream| {
            ModelParams::from_slice(theta)?.as_model().sample_dataset(n, rng)
        },
        move |d: &BivariateDataset| summarize_for(dim, d),
        |a: &SummaryVector, b: &SummaryVector| l1_distance(a, b),
        observed,
        args.eps,
    )?;
    let sd = parse_sd_list(&args.proposal_sd, dim)?;
    let config = MhConfig::new(prior.means(), sd, args.iterations, args.burn_in)?;
    let mut stream = RngStream::substream(args.seed, 0);
    let chain = abc_mh(&problem, &config, &mut stream)?;
    let mean = chain.posterior_mean();
    println!("iterations = {}", args.iterations);
    println!("moves = {}", chain.moves());
    println!("move_rate = {:.4}", chain.moves() as f64 / args.iterations as f64);
    println!("retained_states = {}", chain.retained_len());
    println!("posterior_mean = {}", joined(&mean));
    let mut mcses = Vec::with_capacity(dim);
    for i in 0..dim {
        mcses.push(chain.component_mcse(i)?);
    }
    println!("posterior_mcse = {}", joined(&mcses));
    if let Some(path) = &args.out {
        let mut w = csv_writer(path)?;
        write_record(&mut w, component_labels(dim))?;
        for state in chain.retained_states() {
            write_record(&mut w, state.iter().map(|v| format!("{v}")))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn print_study_summary(report: &StudyReport) {
    println!(
        "{:<10} {:>8} {:>11} {:>11} {:>11} {:>11}",
        "component", "truth", "mmle_bias", "mmle_mse", "abc_bias", "abc_mse"
    );
    for i in 0..report.truth.len() {
        let fmt_opt = |v: &Option<Vec<f64>>| match v {
            Some(v) => format!("{:.4}", v[i]),
            None => "-".to_string(),
        };
        println!(
            "{:<10} {:>8.3} {:>11} {:>11} {:>11.4} {:>11.4}",
            format!("alpha_{}", i + 1),
            report.truth[i],
            fmt_opt(&report.mmle_bias),
            fmt_opt(&report.mmle_mse),
            report.abc_bias[i],
            report.abc_mse[i],
        );
    }
    println!(
        "proposals per dataset = {:.1} (sd {:.1}); capped = {}; datasets = {}; failures = {}; mmle failures = {}",
        report.proposals_mean,
        report.proposals_sd,
        report.capped_runs,
        report.datasets_run,
        report.failures.len(),
        report.mmle_failures,
    );
}

fn study(args: StudyArgs) -> Result<()> {
    let overrides = StudyOptions {
        model: args.model,
        truth: args.truth.as_deref().map(str::parse).transpose()?,
        prior: args.prior,
        n: args.n,
        epsilon: args.eps,
        datasets: args.datasets,
        acceptances: args.acceptances,
        cap: args.cap,
        seed: args.seed,
    };
    let config = parse_config(args.config.as_deref(), overrides)?;
    let report = run_sim_study(&config)?;
    print_study_summary(&report);
    for (j, reason) in &report.failures {
        eprintln!("dataset {j} failed: {reason}");
    }
    for o in &report.outcomes {
        if o.resamples > 0 {
            eprintln!(
                "dataset {} was redrawn {} time(s) (degenerate draw)",
                o.dataset_index, o.resamples
            );
        }
    }
    let (summary, estimates) = emit_report(&report, &args.out)?;
    println!("wrote {} and {}", summary.display(), estimates.display());
    Ok(())
}

fn parse_five(text: &str) -> Result<[f64; 5]> {
    let values: std::result::Result<Vec<f64>, _> =
        text.split(',').map(|t| t.trim().parse::<f64>()).collect();
    let values = values.map_err(|e| Error::Config(format!("bad component list '{text}': {e}")))?;
    if values.len() != 5 {
        return Err(Error::DimensionMismatch { expected: 5, got: values.len() });
    }
    let mut out = [0.0; 5];
    out.copy_from_slice(&values);
    Ok(out)
}

fn print_purchase_report(report: &PurchaseReport) {
    let engine = match report.engine {
        EngineKind::AcceptReject => "accept-reject",
        EngineKind::MetropolisHastings => "metropolis-hastings",
    };
    println!("engine = {engine}");
    println!("posterior_mean = {}", joined(&report.alpha_mean));
    println!("posterior_mcse = {}", joined(&report.alpha_mcse));
    println!(
        "derived shapes (bacon a,b; eggs a,b) = {:.4}, {:.4}, {:.4}, {:.4}",
        report.derived[0], report.derived[1], report.derived[2], report.derived[3]
    );
    println!("correlation_at_mean = {:.4}", report.correlation);
    match report.engine {
        EngineKind::AcceptReject => {
            println!("proposals_used = {}", report.proposals_used);
            println!("acceptances = {}", report.acceptances);
            println!("capped = {}", report.capped);
        }
        EngineKind::MetropolisHastings => {
            println!("iterations = {}", report.proposals_used);
            println!("moves = {}", report.acceptances);
        }
    }
    println!("wall_time_s = {:.3}", report.wall_time.as_secs_f64());
    println!("mean accepted table:");
    for row in &report.mean_table {
        println!(
            "  {:>8.2} {:>8.2} {:>8.2} {:>8.2} {:>8.2}",
            row[0], row[1], row[2], row[3], row[4]
        );
    }
}

fn bacon_eggs(args: BaconEggsArgs) -> Result<()> {
    let engine = match args.engine.to_ascii_lowercase().as_str() {
        "ar" => EngineKind::AcceptReject,
        "mh" => EngineKind::MetropolisHastings,
        other => return Err(Error::Config(format!("unknown engine '{other}' (use ar or mh)"))),
    };
    let mut observed = match &args.data {
        Some(path) => CountTable::from_text(&fs::read_to_string(path)?)?,
        None => bundled_purchase_table(),
    };
    if args.transposed {
        observed = partial_transpose(&observed);
    }
    let default_target = if args.transposed { -0.30 } else { 0.30 };
    let prior_spec = match &args.prior_means {
        Some(text) => {
            EbPriorSpec::new(parse_five(text)?, args.target_corr.unwrap_or(default_target))?
        }
        None if args.transposed => bivbeta::betabinom::negative_dependence_prior(),
        None => bivbeta::betabinom::positive_dependence_prior(),
    };
    let config = PurchaseRunConfig {
        acceptances: args.acceptances,
        proposal_cap: args.cap,
        mh_iterations: args.iterations,
        mh_burn_in: args.burn_in,
        mh_proposal_sd: {
            let sd = parse_sd_list(&args.proposal_sd, 5)?;
            let mut out = [0.0; 5];
            out.copy_from_slice(&sd);
            out
        },
        correlation_draws: args.correlation_draws,
    };
    let report = run_bacon_eggs(
        engine,
        &observed,
        &prior_spec,
        args.eps,
        &config,
        StreamFamily::new(args.seed, 0),
    )?;
    print_purchase_report(&report);
    if let Some(path) = &args.out {
        let mut w = csv_writer(path)?;
        write_record(&mut w, ["name", "value"])?;
        for (i, label) in component_labels(5).iter().enumerate() {
            write_record(&mut w, [format!("{label}_mean"), format!("{}", report.alpha_mean[i])])?;
            write_record(&mut w, [format!("{label}_mcse"), format!("{}", report.alpha_mcse[i])])?;
        }
        for (name, value) in ["bacon_a", "bacon_b", "eggs_a", "eggs_b"].iter().zip(report.derived) {
            write_record(&mut w, [name.to_string(), format!("{value}")])?;
        }
        write_record(
            &mut w,
            ["correlation_at_mean".to_string(), format!("{}", report.correlation)],
        )?;
        write_record(&mut w, ["proposals_used".to_string(), report.proposals_used.to_string()])?;
        write_record(&mut w, ["acceptances".to_string(), report.acceptances.to_string()])?;
        write_record(&mut w, ["capped".to_string(), report.capped.to_string()])?;
        for l in 0..5 {
            for j in 0..5 {
                write_record(
                    &mut w,
                    [format!("mean_table_{l}_{j}"), format!("{}", report.mean_table[l][j])],
                )?;
            }
        }
        w.flush()?;
    }
    Ok(())
}
