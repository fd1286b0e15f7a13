mod config;
mod output;
mod selftest;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use bmanova::harness::{config_digest, sample_gsv, verify_figure, verify_samples};
use bmanova::{LargestGsvCdf, ManovaParams64};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use config::{parse_omega, ExperimentConfig, GridSpec};

const EXIT_STATISTICAL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Error carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        Self::usage(format!("{}: {e}", path.display()))
    }
}

impl From<bmanova::Error> for CliError {
    fn from(e: bmanova::Error) -> Self {
        let code = match e {
            bmanova::Error::NotConverged { .. } | bmanova::Error::Accumulation { .. } => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Parser)]
#[command(name = "bmanova", version, about = "β-MANOVA sampling, largest generalized singular value CDF and KS verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw generalized singular values c1 > … > cn.
    Sample(SampleArgs),
    /// Evaluate the largest-value CDF on a grid.
    Cdf(CdfArgs),
    /// Monte-Carlo vs analytic CDF: KS report, curve table and SVG overlay.
    Verify(VerifyArgs),
    /// Identity suite and scalar oracles.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct EnsembleArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long)]
    beta: f64,
    /// Diagonal of Ω: n comma-separated positive reals.
    #[arg(long, allow_hyphen_values = true)]
    omega: String,
}

impl EnsembleArgs {
    fn params(&self) -> Result<ManovaParams64, CliError> {
        let omega = parse_omega(&self.omega).map_err(|e| CliError::usage(e.to_string()))?;
        Ok(ManovaParams64::new(self.m, self.n, self.p, self.beta, omega)?)
    }
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    #[arg(long)]
    num: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct CdfArgs {
    #[command(flatten)]
    ensemble: EnsembleArgs,
    /// START:STEP:STOP inside (0, 1).
    #[arg(long, value_parser = GridSpec::parse)]
    grid: GridSpec,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    config: PathBuf,
    /// Overrides `output_dir` from the config.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Test the largest values of an existing `sample` file instead of
    /// drawing `n_samples` fresh ones.
    #[arg(long)]
    samples: Option<PathBuf>,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = selftest::SEED)]
    seed: u64,
}

/// Shortest round-trip form; exponent notation for tiny or huge magnitudes.
fn fmt_value(v: f64) -> String {
    if v != 0.0 && !(1e-4..1e15).contains(&v.abs()) {
        format!("{v:e}")
    } else {
        v.to_string()
    }
}

fn fmt_row(values: impl IntoIterator<Item = f64>) -> Vec<String> {
    values.into_iter().map(fmt_value).collect()
}

fn cmd_sample(args: &SampleArgs) -> Result<u8, CliError> {
    let params = args.ensemble.params()?;
    if args.num == 0 {
        return Err(CliError::usage("--num must be at least 1"));
    }
    let draws = sample_gsv(&params, args.num, args.seed)?;
    let digest = config_digest(&params, args.num, &[], 0.0, args.seed);
    let header: Vec<String> = std::iter::once("sample_index".to_string())
        .chain((1..=params.n).map(|i| format!("c{i}")))
        .collect();
    let rows = draws.iter().enumerate().map(|(i, c)| {
        let mut row = vec![i.to_string()];
        row.extend(fmt_row(c.iter().copied()));
        row
    });
    output::write(&args.out, &output::csv(&digest, &header, rows))?;
    Ok(0)
}

fn cmd_cdf(args: &CdfArgs) -> Result<u8, CliError> {
    let params = args.ensemble.params()?;
    let grid = args.grid.points().map_err(|e| CliError::usage(e.to_string()))?;
    let cdf = LargestGsvCdf::new(&params)?;
    let values = grid.par_iter().map(|&x| cdf.eval(x)).collect::<bmanova::Result<Vec<f64>>>()?;
    let digest = config_digest(&params, 0, &grid, 0.0, 0);
    let rows = grid.iter().zip(&values).map(|(&x, &v)| fmt_row([x, v]));
    output::write(&args.out, &output::csv(&digest, &["x".into(), "analytic_cdf".into()], rows))?;
    Ok(0)
}

fn cmd_verify(args: &VerifyArgs) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| CliError::io(&args.config, e))?;
    let config = ExperimentConfig::from_json(&text)?;
    config.validate()?;
    let out_dir = args
        .out_dir
        .clone()
        .or_else(|| config.output_dir.clone())
        .ok_or_else(|| CliError::usage("no output directory: pass --out-dir or set output_dir"))?;
    let params = config.params()?;
    let grid = config.grid_points()?;
    let result = match &args.samples {
        Some(path) => verify_samples(&params, output::read_largest(path, params.n)?, &grid, config.alpha, config.seed)?,
        None => verify_figure(&params, config.n_samples, &grid, config.alpha, config.seed)?,
    };
    let report = &result.report;
    let digest = &report.config_digest;

    let json = serde_json::to_string_pretty(report).map_err(|e| CliError::usage(e.to_string()))?;
    output::write(&out_dir.join("report.json"), &(json + "\n"))?;
    let header = ["x", "empirical_cdf", "analytic_cdf"].map(String::from);
    let rows = result.curve.iter().map(|c| fmt_row([c.x, c.empirical, c.analytic]));
    output::write(&out_dir.join("curve.csv"), &output::csv(digest, &header, rows))?;
    let title = format!(
        "P(c1 < x): m={}, n={}, p={}, β={}, Ω=diag{:?}, N={}",
        params.m,
        params.n,
        params.p,
        config.beta,
        config.omega,
        report.n_samples
    );
    let svg = output::overlay_svg(digest, &title, result.ecdf.sorted_samples(), &result.curve);
    output::write(&out_dir.join("figure.svg"), &svg)?;

    println!(
        "{} ks_stat={:.6} critical={:.6} alpha={} n={}",
        if report.passed { "PASS" } else { "FAIL" },
        report.ks_stat,
        report.critical_value,
        report.alpha,
        report.n_samples
    );
    eprintln!("runtime_ms={}", report.runtime_ms);
    Ok(if report.passed { 0 } else { EXIT_STATISTICAL })
}

fn cmd_selftest(args: &SelftestArgs) -> Result<u8, CliError> {
    let start = Instant::now();
    let items = selftest::run(args.seed)?;
    for item in &items {
        println!("{} {}: {}", if item.passed { "PASS" } else { "FAIL" }, item.name, item.summary);
        if let Some(detail) = item.detail.as_ref().filter(|_| !item.passed) {
            println!("    {detail}");
        }
    }
    let failed = items.iter().filter(|i| !i.passed).count();
    println!("{} of {} checks passed", items.len() - failed, items.len());
    eprintln!("runtime_ms={}", start.elapsed().as_millis());
    Ok(if failed == 0 { 0 } else { EXIT_STATISTICAL })
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("BMANOVA_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::usage(format!("BMANOVA_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match &cli.command {
        Command::Sample(a) => cmd_sample(a),
        Command::Cdf(a) => cmd_cdf(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Selftest(a) => cmd_selftest(a),
    });
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
