use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "aluthge",
    version,
    about = "Lambda-Aluthge transforms and randomized verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the lambda-Aluthge transform to a matrix file.
    Transform(TransformArgs),
    /// Iterate the transform and write a per-step trace.
    Iterate(IterateArgs),
    /// Run the randomized verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also write `<stem>.isometry.json` and `<stem>.modulus.json` next to the output.
    #[arg(long)]
    pub factors: bool,
    #[arg(long)]
    pub tol_rank: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TraceFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct IterateArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, default_value_t = 0.5, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Stop once a step moves less than `conv_tol * (1 + ||T||_F)`.
    #[arg(long, default_value_t = 1e-8)]
    pub conv_tol: f64,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = TraceFormat::Csv)]
    pub format: TraceFormat,
    /// Write the last iterate as a matrix file.
    #[arg(long = "final")]
    pub final_iterate: Option<PathBuf>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AggregateFormat {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
    /// Comma-separated dimensions or ranges, e.g. `2-6` or `3,5,8`.
    #[arg(long)]
    pub dims: Option<String>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol_eq: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol_rank: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tol_fix: Option<f64>,
    /// Comma-separated check ids; all checks when omitted.
    #[arg(long)]
    pub checks: Option<String>,
    #[arg(long, value_enum, default_value_t = AggregateFormat::Json)]
    pub format: AggregateFormat,
    /// Leave the generation time out of the aggregate.
    #[arg(long)]
    pub no_timestamp: bool,
    #[arg(long, default_value = "aluthge-reports")]
    pub out: PathBuf,
    /// Only print the aggregate line.
    #[arg(long, short)]
    pub quiet: bool,
}
