use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod manifest;

/// Exit codes.
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_GUARD: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "agpir",
    version,
    about = "Secure private information retrieval over curves"
)]
pub struct Cli {
    /// Worker threads for searches and subset enumeration (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Render F_{2^m} elements as polynomials in α on the console.
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Curve search and inspection.
    #[command(subcommand)]
    Curve(CurveCmd),
    /// Plan, verify and audit a scheme from a config file.
    #[command(subcommand)]
    Scheme(SchemeCmd),
    /// Run the retrieval protocol end to end.
    #[command(subcommand)]
    Pir(PirCmd),
    /// Maximal-rate tables.
    #[command(subcommand)]
    Rate(RateCmd),
}

#[derive(Subcommand, Debug)]
pub enum CurveCmd {
    /// Search for curves with many rational points.
    Search(SearchArgs),
    /// Validate a curve and count its points.
    Info(InfoArgs),
}

#[derive(Subcommand, Debug)]
pub enum SchemeCmd {
    Plan(PlanArgs),
    Verify(VerifyArgs),
    /// Verification plus σ(U) tables beyond the design thresholds.
    Audit(AuditArgs),
}

#[derive(Subcommand, Debug)]
pub enum PirCmd {
    Run(RunArgs),
}

#[derive(Subcommand, Debug)]
pub enum RateCmd {
    Sweep(SweepArgs),
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    /// Field characteristic.
    #[arg(long)]
    pub p: Option<u32>,
    /// Extension degree (characteristic 2 only).
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Modulus coefficients, low degree first.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Vec<u32>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Mode {
    Exhaustive,
    Random,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    #[arg(long)]
    pub genus: usize,
    #[arg(long, default_value_t = 0)]
    pub min_points: usize,
    /// Maximum number of candidate curves examined.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: u64,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    pub mode: Mode,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Keep only the first rows of the sorted result.
    #[arg(long)]
    pub limit: Option<usize>,
    /// CSV output (`F;H;num_points;num_y_zeros`); stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InfoArgs {
    /// Scheme config supplying [field] and [curve].
    #[arg(long, conflicts_with_all = ["p", "f"])]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub field: FieldArgs,
    /// F coefficients, low degree first.
    #[arg(long, value_delimiter = ',')]
    pub f: Vec<u32>,
    /// H coefficients, low degree first.
    #[arg(long, value_delimiter = ',')]
    pub h: Vec<u32>,
    /// Genus; inferred from deg F when absent.
    #[arg(long)]
    pub g: Option<usize>,
    /// List every rational point.
    #[arg(long)]
    pub points: bool,
}

#[derive(Args, Debug)]
pub struct PlanArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Write the plan as JSON with a manifest sidecar.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum VerifyMode {
    Dual,
    Exhaustive,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, value_enum, default_value_t = VerifyMode::Dual)]
    pub mode: VerifyMode,
    /// Security level to check instead of the configured X.
    #[arg(long)]
    pub x_claim: Option<usize>,
    /// Privacy level to check instead of the configured T.
    #[arg(long)]
    pub t_claim: Option<usize>,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Directory for σ CSV tables (`U,insecure,total,sigma`) and manifests.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RunArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// Requested file, 1-based.
    #[arg(long, default_value_t = 1)]
    pub mu: usize,
    /// Overrides the config seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Files as CSV: M lines of L comma-separated field elements.
    #[arg(long)]
    pub files: Option<PathBuf>,
    /// Per-server storage, queries and responses as CSV.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: PathBuf,
    /// CSV output; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
#[derive(Debug)]
pub enum Failure {
    Verify(String),
    Usage(String),
    Guard(String),
}

impl From<agpir::Error> for Failure {
    fn from(e: agpir::Error) -> Self {
        if e.is_guard() {
            Failure::Guard(e.to_string())
        } else if matches!(e, agpir::Error::Internal(_)) {
            Failure::Verify(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<agpir::Error>() {
            Ok(inner) => inner.into(),
            Err(e) => Failure::Usage(format!("{e:#}")),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("warning: {e}");
        }
    }
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFY)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("resource limit: {msg}");
            ExitCode::from(EXIT_GUARD)
        }
    }
}
