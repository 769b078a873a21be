//! `aesthia`: batch measurement, correlation reports, offline ranking,
//! survey simulation, physical complexity scoring and the survey server.
//!
//! Exit codes: 0 success, 1 failure or partial failure, 2 usage error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use aesthia_core::measures::{Measure, MeasureConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "aesthia", version, about = "Image complexity measures and pairwise ranking")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute complexity measures for every image in a manifest.
    Measure(MeasureArgs),
    /// Correlation matrix of a results CSV against its score column.
    Correlate(CorrelateArgs),
    /// Replay a comparison log into Glicko ratings.
    Rank(RankArgs),
    /// Generate a synthetic comparison log from a Bradley-Terry model.
    Simulate(SimulateArgs),
    /// Physical complexity of layered forms stored as JSON.
    Physical(PhysicalArgs),
    /// Run the survey server.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct MeasureFlags {
    /// Window radius for local-mean binarisation.
    #[arg(long, default_value_t = 2)]
    r_adapt: usize,
    /// Window radius for coarse-graining.
    #[arg(long, default_value_t = 5)]
    r_cg: usize,
    /// Coarse-graining threshold.
    #[arg(long, default_value_t = 0.23)]
    delta: f64,
    /// JPEG quality in (0, 1].
    #[arg(long, default_value_t = 0.75)]
    jpeg_quality: f64,
    /// Peak of the fractal aesthetic curve.
    #[arg(long, default_value_t = 1.35)]
    peak: f64,
    /// Width of the fractal aesthetic curve.
    #[arg(long, default_value_t = 0.2)]
    sigma: f64,
    /// Smallest box edge for box counting.
    #[arg(long, default_value_t = 2)]
    box_min: usize,
    /// Largest box edge as a fraction of the shorter image side.
    #[arg(long, default_value_t = 0.25)]
    box_max_frac: f64,
}

impl MeasureFlags {
    fn config(&self) -> MeasureConfig {
        MeasureConfig {
            r_adapt: self.r_adapt,
            r_cg: self.r_cg,
            delta: self.delta,
            jpeg_quality: self.jpeg_quality,
            peak: self.peak,
            sigma: self.sigma,
            box_min: self.box_min,
            box_max_frac: self.box_max_frac,
        }
    }
}

#[derive(Debug, Args)]
struct MeasureArgs {
    /// Dataset manifest CSV (`id,path,score,category`).
    manifest: PathBuf,
    /// Output results CSV.
    #[arg(short, long)]
    out: PathBuf,
    /// Comma-separated subset of measures, e.g. `S,D,C_mc`.
    #[arg(long, value_delimiter = ',')]
    measures: Option<Vec<Measure>>,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    flags: MeasureFlags,
}

#[derive(Debug, Args)]
struct CorrelateArgs {
    /// Results CSV written by `measure`.
    results: PathBuf,
    /// Name of the score column.
    #[arg(long, default_value = "score")]
    score: String,
    /// Rank correlation instead of Pearson.
    #[arg(long)]
    spearman: bool,
    /// Drop rows with any missing value instead of pairwise deletion.
    #[arg(long)]
    complete_rows: bool,
    /// Keep only rows whose score is at least this value.
    #[arg(long)]
    min_score: Option<f64>,
    /// Print a markdown table instead of plain text.
    #[arg(long)]
    markdown: bool,
    /// Also write the cells as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RankArgs {
    /// JSON-lines comparison log.
    log: PathBuf,
    /// Keep images whose RD is below this bound in both prompts.
    #[arg(long)]
    max_rd: Option<f64>,
    /// Seed the table with every image of a manifest, as `NAME=PATH`.
    #[arg(long = "manifest", value_name = "NAME=PATH")]
    manifests: Vec<String>,
    /// Output ranking CSV; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Number of comparisons.
    #[arg(long, default_value_t = 2000)]
    events: usize,
    /// Number of items.
    #[arg(long, default_value_t = 20)]
    items: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output log; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Also write the generating log-strengths as CSV.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct PhysicalArgs {
    /// Directory of `*.json` layered forms.
    forms: PathBuf,
    /// Output CSV `id,Sc`; stdout when absent.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ServeArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: PathBuf,
    /// Override the configured port.
    #[arg(long)]
    port: Option<u16>,
    /// Override the configured pair-sampling seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Serve this directory at `/`.
    #[arg(long)]
    static_dir: Option<PathBuf>,
}

/// A run that finished but with failures in some items.
pub struct Partial(pub String);

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("AESTHIA_LOG", "warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure(a) => commands::measure(a),
        Command::Correlate(a) => commands::correlate(a),
        Command::Rank(a) => commands::rank(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Physical(a) => commands::physical(a),
        Command::Serve(a) => commands::serve(a),
    };
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Partial(msg))) => {
            eprintln!("aesthia: {msg}");
            ExitCode::from(1)
        }
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("aesthia: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Run(err)) => {
            eprintln!("aesthia: {err:#}");
            ExitCode::from(1)
        }
    }
}
