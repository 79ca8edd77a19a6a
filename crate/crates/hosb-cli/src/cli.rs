//! Argument definitions. Every flag has an `HOSB_*` environment mirror.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use hosb_core::bench::Algorithm;

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    Algorithm::from_tag(&s.to_ascii_lowercase())
        .ok_or_else(|| format!("unknown algorithm {s:?} (use 3bsb, 3dsb, 3sa, 2bsb, 2dsb)"))
}

/// Spin-based combinatorial optimization with higher-order cost
/// functions: planted 3R3X instances, SB/SA solvers, gadget reduction,
/// and step-to-solution benchmarking.
#[derive(Debug, Parser)]
#[command(name = "hosb", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate planted 3R3X instance files.
    Generate(GenerateArgs),
    /// Gadgetize a cubic instance into a quadratic pubo file.
    Reduce(ReduceArgs),
    /// Run one solver on one instance; JSON result on stdout.
    /// Exit code 0 when the certified optimum was reached, 2 otherwise.
    Solve(SolveArgs),
    /// Estimate success probabilities over instance sets; streams CSV.
    Bench(BenchArgs),
    /// Fit scaling exponents from a bench CSV; JSON on stdout.
    Fit(FitArgs),
    /// Report the exact optimum via GF(2) (and optional exhaustive search).
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of spin variables (and clauses) per instance; n >= 4.
    #[arg(long, env = "HOSB_N")]
    pub n: usize,
    /// How many instances to generate.
    #[arg(long, default_value_t = 1, env = "HOSB_COUNT")]
    pub count: usize,
    #[arg(long, default_value_t = 0, env = "HOSB_SEED")]
    pub seed: u64,
    /// Output directory for the .xorsat files.
    #[arg(long, env = "HOSB_OUT")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Input file (xorsat3 or pubo).
    pub input: PathBuf,
    /// Output pubo file (stdout when omitted).
    #[arg(long, env = "HOSB_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Instance file (xorsat3 or pubo).
    pub instance: PathBuf,
    /// Algorithm tag: 3bsb, 3dsb, 3sa, 2bsb, or 2dsb.
    #[arg(long, value_parser = parse_algo, env = "HOSB_ALGO")]
    pub algo: Algorithm,
    #[arg(long, env = "HOSB_DT")]
    pub dt: Option<f64>,
    #[arg(long, env = "HOSB_C1")]
    pub c1: Option<f64>,
    #[arg(long, env = "HOSB_BETA1")]
    pub beta1: Option<f64>,
    #[arg(long, env = "HOSB_STEPS")]
    pub steps: Option<usize>,
    #[arg(long, env = "HOSB_A0")]
    pub a0: Option<f64>,
    #[arg(long, env = "HOSB_EPS")]
    pub eps: Option<f64>,
    #[arg(long, default_value_t = 0, env = "HOSB_SEED")]
    pub seed: u64,
    /// Treat this energy as the known optimum for pubo inputs.
    #[arg(long, env = "HOSB_TARGET")]
    pub target: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance files.
    pub instances: Vec<PathBuf>,
    /// Directory to scan for .xorsat/.pubo files.
    #[arg(long, env = "HOSB_DIR")]
    pub dir: Option<PathBuf>,
    #[arg(long, value_parser = parse_algo, env = "HOSB_ALGO")]
    pub algo: Algorithm,
    /// Comma-separated dt grid (default: the tuned reference value).
    #[arg(long, value_delimiter = ',', env = "HOSB_DT")]
    pub dt: Option<Vec<f64>>,
    /// Comma-separated c1 grid.
    #[arg(long, value_delimiter = ',', env = "HOSB_C1")]
    pub c1: Option<Vec<f64>>,
    /// Comma-separated beta1 grid (SA only).
    #[arg(long, value_delimiter = ',', env = "HOSB_BETA1")]
    pub beta1: Option<Vec<f64>>,
    /// Comma-separated step counts (default: 1000).
    #[arg(long, value_delimiter = ',', env = "HOSB_STEPS")]
    pub steps: Option<Vec<usize>>,
    /// Runs per (instance, grid point).
    #[arg(long, default_value_t = 100, env = "HOSB_RUNS")]
    pub runs: usize,
    #[arg(long, default_value_t = 0, env = "HOSB_SEED")]
    pub seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, env = "HOSB_WORKERS")]
    pub workers: Option<usize>,
    #[arg(long, env = "HOSB_A0")]
    pub a0: Option<f64>,
    #[arg(long, env = "HOSB_EPS")]
    pub eps: Option<f64>,
    /// CSV output path (stdout when omitted).
    #[arg(long, env = "HOSB_OUT")]
    pub out: Option<PathBuf>,
    /// Append rows without rewriting the header.
    #[arg(long, default_value_t = false)]
    pub append: bool,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    /// Bench CSV to read.
    #[arg(long, env = "HOSB_INPUT")]
    pub input: PathBuf,
    /// Restrict to one algorithm tag (required for mixed CSVs).
    #[arg(long, value_parser = parse_algo, env = "HOSB_ALGO")]
    pub algo: Option<Algorithm>,
    /// Smallest N included in the fit.
    #[arg(long, env = "HOSB_FIT_MIN")]
    pub fit_min: Option<usize>,
    /// Largest N included in the fit.
    #[arg(long, env = "HOSB_FIT_MAX")]
    pub fit_max: Option<usize>,
    /// JSON output path (stdout when omitted).
    #[arg(long, env = "HOSB_OUT")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Instance file (xorsat3, or pubo with --exhaustive).
    pub instance: PathBuf,
    /// Also enumerate all configurations (n <= 24).
    #[arg(long, default_value_t = false)]
    pub exhaustive: bool,
}
