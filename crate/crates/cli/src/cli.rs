use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Estimate software effort with SEER-SEM and calibrate its parameter-value
/// table against historical projects.
#[derive(Debug, Parser)]
#[command(name = "seer-nf", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the effort of one rated project.
    Estimate(EstimateArgs),
    /// Check that a value table is positive and monotone.
    ValidateTable(ValidateTableArgs),
    /// Print the built-in synthetic value table as TOML.
    InitTable,
    /// Print the built-in COCOMO-to-SEER rating mapping as TOML.
    InitMapping,
    /// Convert a COCOMO-format dataset into model projects.
    Transfer(TransferArgs),
    /// Train a value table on a project list.
    Calibrate(CalibrateArgs),
    /// Score a value table on a project list.
    Evaluate(EvaluateArgs),
    /// Run a full case study: transfer, split, train, evaluate.
    Case(CaseArgs),
    /// Render a saved JSON report.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// Value table (TOML).
    #[arg(long)]
    pub table: PathBuf,
    /// Effective size in SLOC.
    #[arg(long)]
    pub size: f64,
    /// Fraction of the software impacted by reuse.
    #[arg(long, default_value_t = 0.0)]
    pub sibr: f64,
    /// Rating as SYMBOL=VALUE, VALUE being a label (e.g. Hi+) or coordinate
    /// in [1, 18]. Unrated parameters are Nominal. Repeatable.
    #[arg(long = "rating", value_name = "SYMBOL=VALUE")]
    pub ratings: Vec<String>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, default_value_t = 12.0)]
    pub months_per_year: f64,
}

#[derive(Debug, Args)]
pub struct ValidateTableArgs {
    #[arg(long)]
    pub table: PathBuf,
}

#[derive(Debug, Args)]
pub struct OutDirArg {
    /// Output directory; falls back to $SEER_NF_OUT_DIR.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TransferArgs {
    /// COCOMO-format dataset (CSV).
    #[arg(long)]
    pub dataset: PathBuf,
    /// Rating mapping (TOML); defaults to the built-in mapping.
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutDirArg,
}

#[derive(Debug, Args, Default)]
pub struct TrainingFlags {
    /// TOML file with [calibration] and [report] sections; flags win over it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Learning rate.
    #[arg(long, alias = "learning-rate")]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Relative loss decrease below which training stops.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Keep the learning rate fixed instead of halving it on a loss increase.
    #[arg(long)]
    pub no_backtracking: bool,
    /// Extra PRED level as a fraction (e.g. 0.25). Repeatable.
    #[arg(long = "pred-level")]
    pub pred_levels: Vec<f64>,
    /// MRE above which a project counts as an outlier.
    #[arg(long)]
    pub outlier_threshold: Option<f64>,
    #[arg(long)]
    pub months_per_year: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    /// Training projects (canonical CSV, or JSON by extension).
    #[arg(long)]
    pub projects: PathBuf,
    #[arg(long)]
    pub table: PathBuf,
    #[command(flatten)]
    pub training: TrainingFlags,
    #[command(flatten)]
    pub out: OutDirArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[arg(long)]
    pub projects: PathBuf,
    #[arg(long)]
    pub table: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(flatten)]
    pub training: TrainingFlags,
    /// Also write the report files here.
    #[command(flatten)]
    pub out: OutDirArg,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    /// Published COCOMO-format dataset (CSV).
    #[arg(long, required_unless_present = "projects", conflicts_with = "projects")]
    pub dataset: Option<PathBuf>,
    /// Already transferred projects, instead of --dataset.
    #[arg(long)]
    pub projects: Option<PathBuf>,
    #[arg(long)]
    pub mapping: Option<PathBuf>,
    /// Industrial COCOMO-format dataset, evaluated in full and never trained on.
    #[arg(long, conflicts_with = "industrial_projects")]
    pub industrial: Option<PathBuf>,
    #[arg(long)]
    pub industrial_projects: Option<PathBuf>,
    #[arg(long)]
    pub table: PathBuf,
    /// c1, c2, c3, c4-1, c4-2, mre:<max> or ranges:<a>-<b>:<c>-<d>.
    #[arg(long)]
    pub protocol: Option<String>,
    #[command(flatten)]
    pub training: TrainingFlags,
    #[command(flatten)]
    pub out: OutDirArg,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// `report.json` from `case`, or an evaluation report JSON.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[arg(long, default_value_t = 12.0)]
    pub months_per_year: f64,
}
