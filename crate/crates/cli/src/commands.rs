use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use pureldp::analytics::{
    analytic_var, significance_threshold, split_ratio, split_verdict, variance_table, ThresholdSpec,
};
use pureldp::protocols::privacy::{check_privacy, PrivacyCheck};
use pureldp::sim::{
    run_trial_with, topk_error, tp_fp, DataSource, ExperimentConfig, ThresholdRule,
};
use pureldp::{Execution, PrivacyBudget, ProtocolKind, ProtocolSpec};

use crate::output::{render, render_table, Format, Precision};

#[derive(Debug, Parser)]
#[command(
    name = "pureldp",
    version,
    about = "Pure LDP frequency oracles: analysis and simulation"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Worker threads (default: all available cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analytic per-user variance Var*/n of every protocol.
    Table(TableArgs),
    /// Monte-Carlo repetitions of one protocol on synthetic or file data.
    Bench(BenchArgs),
    /// Exhaustive worst-case likelihood-ratio check against e^eps.
    PrivacyCheck(PrivacyArgs),
    /// Significance threshold for frequency estimates.
    Threshold(ThresholdArgs),
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long = "epsilon", value_delimiter = ',', default_values_t = [0.5, 1.0, 2.0, 4.0])]
    pub epsilons: Vec<f64>,
    /// Domain sizes for the DE columns.
    #[arg(long = "d", value_delimiter = ',', default_values_t = [2, 32, 1024])]
    pub ds: Vec<usize>,
    /// Decimals, or `full` for twelve significant digits.
    #[arg(long, default_value = "2")]
    pub precision: Precision,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub protocol: ProtocolKind,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub d: usize,
    /// Users per repetition; ignored for `file:` data.
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// `zipf:<s>`, `uniform` or `file:<path>`.
    #[arg(long, default_value = "zipf:1.1")]
    pub dist: String,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// THE threshold (default: variance-optimal).
    #[arg(long)]
    pub theta: Option<f64>,
    /// OLH hash range (default: round(e^eps) + 1).
    #[arg(long)]
    pub g: Option<usize>,
    /// Values with the largest true counts used for `topk_error` (default: min(30, d)).
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Significance level of the positive-detection threshold.
    #[arg(long, default_value_t = 0.05, conflicts_with = "threshold")]
    pub threshold_alpha: f64,
    /// Explicit count threshold instead of the significance threshold.
    #[arg(long)]
    pub threshold: Option<f64>,
    /// Add a wall-time `seconds` column (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Args)]
pub struct PrivacyArgs {
    #[arg(long)]
    pub protocol: ProtocolKind,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub g: Option<usize>,
    /// Test hook: replace the keep probability without validation.
    #[arg(long, hide = true, requires = "override_q")]
    pub override_p: Option<f64>,
    /// Test hook: replace the flip probability without validation.
    #[arg(long, hide = true, requires = "override_p")]
    pub override_q: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[arg(long, default_value = "olh")]
    pub protocol: ProtocolKind,
    #[arg(long)]
    pub epsilon: f64,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub n: u64,
    #[arg(long, default_value_t = 0.05)]
    pub threshold_alpha: f64,
    /// Also report T1/T2 for budget splitting versus population splitting.
    #[arg(long)]
    pub split_ratio: bool,
}

/// What a command printed and how the process should exit.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: String,
    pub exit_code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            exit_code: 0,
        }
    }
}

/// Runs a parsed command line. Errors are usage or input errors (exit 2).
pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Table(a) => cmd_table(a, cli.format).map(Outcome::ok),
        Command::Bench(a) => {
            with_threads(cli.threads, || cmd_bench(a, cli.format)).map(Outcome::ok)
        }
        Command::PrivacyCheck(a) => cmd_privacy_check(a, cli.format),
        Command::Threshold(a) => cmd_threshold(a, cli.format).map(Outcome::ok),
    }
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match threads {
        Some(0) => bail!("--threads must be at least 1"),
        #[cfg(feature = "parallel")]
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .context("building the thread pool")?
            .install(f),
        _ => f(),
    }
}

#[derive(Serialize)]
struct TableCell {
    epsilon: f64,
    column: String,
    var_per_user: f64,
}

pub fn cmd_table(args: &TableArgs, format: Format) -> Result<String> {
    let rows = variance_table(&args.epsilons, &args.ds)?;
    match format {
        Format::Json => {
            let cells: Vec<TableCell> = rows
                .iter()
                .map(|r| TableCell {
                    epsilon: r.epsilon,
                    column: r.label(),
                    var_per_user: r.var_per_user,
                })
                .collect();
            render(&cells, format)
        }
        Format::Csv => {
            let width = rows.len() / args.epsilons.len().max(1);
            let mut header = vec!["epsilon".to_string()];
            header.extend(rows.iter().take(width).map(|r| r.label()));
            let body: Vec<Vec<String>> = rows
                .chunks(width.max(1))
                .map(|chunk| {
                    let mut line = vec![chunk[0].epsilon.to_string()];
                    line.extend(chunk.iter().map(|r| args.precision.format(r.var_per_user)));
                    line
                })
                .collect();
            render_table(&header, &body)
        }
    }
}

fn parse_dist(s: &str) -> Result<DataSource> {
    if s == "uniform" {
        return Ok(DataSource::Uniform);
    }
    if let Some(rest) = s.strip_prefix("zipf:") {
        let exponent: f64 = rest
            .parse()
            .with_context(|| format!("bad zipf exponent '{rest}'"))?;
        return Ok(DataSource::Zipf(exponent));
    }
    if let Some(path) = s.strip_prefix("file:") {
        return Ok(DataSource::File(PathBuf::from(path)));
    }
    bail!("--dist must be zipf:<s>, uniform or file:<path>, got '{s}'")
}

/// A count column: integral on repetition rows, a mean on the summary row.
#[derive(Serialize, Clone, Copy)]
#[serde(untagged)]
enum Count {
    Exact(usize),
    Mean(f64),
}

#[derive(Serialize)]
struct BenchRow {
    protocol: String,
    epsilon: f64,
    d: usize,
    n: usize,
    rep: String,
    avg_sq_error: f64,
    avg_sq_error_sd: Option<f64>,
    analytic_sq_error: f64,
    topk_error: f64,
    tp: Count,
    fp: Count,
    threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    seconds: Option<f64>,
}

pub fn bench_config(args: &BenchArgs) -> Result<ExperimentConfig> {
    let threshold = match args.threshold {
        Some(t) => ThresholdRule::Explicit(t),
        None => ThresholdRule::Alpha(args.threshold_alpha),
    };
    let config = ExperimentConfig {
        protocol: args.protocol,
        theta: args.theta,
        g: args.g,
        epsilon: args.epsilon,
        d: args.d,
        n: args.n,
        source: parse_dist(&args.dist)?,
        master_seed: args.seed,
        repetitions: args.reps,
        top_k: args.top_k,
        threshold,
    };
    config.validate()?;
    Ok(config)
}

fn mean_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let sd = if xs.len() > 1 {
        (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt()
    } else {
        0.0
    };
    (mean, sd)
}

pub fn cmd_bench(args: &BenchArgs, format: Format) -> Result<String> {
    let config = bench_config(args)?;
    let spec = config.spec()?;
    let started = Instant::now();
    let mut rows = Vec::with_capacity(config.repetitions + 1);
    for rep in 0..config.repetitions {
        let result = run_trial_with(&config, rep as u64, Execution::Parallel)?;
        let n = result.estimates.n as usize;
        let threshold = config.threshold_for(&spec, n)?;
        let (tp, fp) = tp_fp(&result, threshold);
        rows.push(BenchRow {
            protocol: spec.kind().name().to_string(),
            epsilon: config.epsilon,
            d: config.d,
            n,
            rep: rep.to_string(),
            avg_sq_error: result.avg_sq_error,
            avg_sq_error_sd: None,
            analytic_sq_error: n as f64 * spec.var_star()?,
            topk_error: topk_error(&result, config.top_k()),
            tp: Count::Exact(tp),
            fp: Count::Exact(fp),
            threshold,
            seconds: args.timing.then_some(result.seconds),
        });
    }
    let col = |f: &dyn Fn(&BenchRow) -> f64| mean_sd(&rows.iter().map(f).collect::<Vec<_>>());
    let as_f64 = |c: Count| match c {
        Count::Exact(x) => x as f64,
        Count::Mean(x) => x,
    };
    let (err_mean, err_sd) = col(&|r| r.avg_sq_error);
    let summary = BenchRow {
        protocol: spec.kind().name().to_string(),
        epsilon: config.epsilon,
        d: config.d,
        n: rows[0].n,
        rep: "summary".to_string(),
        avg_sq_error: err_mean,
        avg_sq_error_sd: Some(err_sd),
        analytic_sq_error: col(&|r| r.analytic_sq_error).0,
        topk_error: col(&|r| r.topk_error).0,
        tp: Count::Mean(col(&|r| as_f64(r.tp)).0),
        fp: Count::Mean(col(&|r| as_f64(r.fp)).0),
        threshold: col(&|r| r.threshold).0,
        seconds: args.timing.then(|| col(&|r| r.seconds.unwrap_or(0.0)).0),
    };
    rows.push(summary);
    eprintln!(
        "bench: {} x {} repetitions in {:.2}s",
        spec.kind(),
        config.repetitions,
        started.elapsed().as_secs_f64()
    );
    render(&rows, format)
}

pub fn privacy_spec(args: &PrivacyArgs) -> Result<ProtocolSpec> {
    let mut spec = ProtocolSpec::new(args.protocol, args.epsilon, args.d)?;
    if let Some(theta) = args.theta {
        spec = spec.with_theta(theta)?;
    }
    if let Some(g) = args.g {
        spec = spec.with_g(g)?;
    }
    if let (Some(p), Some(q)) = (args.override_p, args.override_q) {
        spec = spec.with_raw_probabilities(p, q)?;
    }
    Ok(spec)
}

#[derive(Serialize)]
struct PrivacyRow {
    protocol: String,
    epsilon: f64,
    d: usize,
    mode: &'static str,
    outputs_checked: u64,
    max_ratio: f64,
    bound: f64,
    result: &'static str,
}

impl From<&PrivacyCheck> for PrivacyRow {
    fn from(c: &PrivacyCheck) -> Self {
        Self {
            protocol: c.protocol.name().to_string(),
            epsilon: c.epsilon,
            d: c.d,
            mode: c.mode,
            outputs_checked: c.outputs_checked,
            max_ratio: c.max_ratio,
            bound: c.bound,
            result: if c.passed { "PASS" } else { "FAIL" },
        }
    }
}

pub fn cmd_privacy_check(args: &PrivacyArgs, format: Format) -> Result<Outcome> {
    let spec = privacy_spec(args)?;
    let check = check_privacy(&spec)?;
    Ok(Outcome {
        stdout: render(&[PrivacyRow::from(&check)], format)?,
        exit_code: if check.passed { 0 } else { 1 },
    })
}

#[derive(Serialize)]
struct ThresholdRow {
    protocol: String,
    epsilon: f64,
    d: usize,
    n: u64,
    alpha: f64,
    var_per_user: f64,
    threshold: f64,
    coefficient: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    split_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    split_verdict: Option<pureldp::analytics::SplitVerdict>,
}

pub fn cmd_threshold(args: &ThresholdArgs, format: Format) -> Result<String> {
    let var = analytic_var(args.protocol, args.epsilon, args.d)?;
    let spec = ThresholdSpec::new(args.threshold_alpha, args.d, args.n as f64, var)?;
    let threshold = significance_threshold(&spec)?;
    let ratio = if args.split_ratio {
        if args.protocol != ProtocolKind::Olh && args.protocol != ProtocolKind::Oue {
            return Err(anyhow!(
                "--split-ratio is defined for OLH/OUE variance only"
            ));
        }
        Some(split_ratio(PrivacyBudget::new(args.epsilon)?))
    } else {
        None
    };
    let row = ThresholdRow {
        protocol: args.protocol.name().to_string(),
        epsilon: args.epsilon,
        d: args.d,
        n: args.n,
        alpha: args.threshold_alpha,
        var_per_user: var,
        threshold,
        coefficient: threshold / (args.n as f64).sqrt(),
        split_ratio: ratio,
        split_verdict: ratio.map(split_verdict),
    };
    render(&[row], format)
}
