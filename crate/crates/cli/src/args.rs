use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use metalp::Method;

#[derive(Debug, Parser)]
#[command(
    name = "metalp",
    version,
    about = "Distributed nonparametric variable screening for binary responses"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Partition, score, meta-combine and rank every predictor.
    Analyze(AnalyzeArgs),
    /// Write the partition plan for a dataset without analysing it.
    Partition(PartitionArgs),
    /// Generate seeded datasets from the 50-predictor logistic model.
    Simulate(SimulateArgs),
    /// Run a worked case study.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// JSON schema describing every CSV column.
    #[arg(long)]
    pub schema: PathBuf,
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct SchemeArgs {
    /// Number of random partitions.
    #[arg(long, value_name = "K", value_parser = positive)]
    pub partitions: Option<usize>,
    /// Random partitions with k = floor(n^GAMMA + 0.5).
    #[arg(long, value_parser = open_unit)]
    pub gamma: Option<f64>,
    /// One partition per distinct value of this column.
    #[arg(long, value_name = "COLUMN")]
    pub partition_by: Option<String>,
}

#[derive(Debug, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Assign rows sharing a value of this column to the same random partition.
    #[arg(long, value_name = "COLUMN")]
    pub group_by: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub plan: PlanArgs,
    /// Output directory for report.json and report.csv.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Reml)]
    pub method: MethodArg,
    /// Number of score polynomials per predictor, unless the schema overrides it.
    #[arg(long, default_value_t = metalp::score::DEFAULT_M, value_parser = positive)]
    pub m: usize,
    /// Confidence level of the reported intervals.
    #[arg(long, default_value_t = 0.95, value_parser = open_unit)]
    pub ci: f64,
    /// Worker threads for the map stage (default: available parallelism).
    #[arg(long, env = "METALP_WORKERS", value_parser = positive)]
    pub workers: Option<usize>,
    /// Also write the partition plan to this file.
    #[arg(long, value_name = "FILE")]
    pub emit_plan: Option<PathBuf>,
    /// Ranked variables to print.
    #[arg(long, default_value_t = 10)]
    pub top: usize,
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[command(flatten)]
    pub plan: PlanArgs,
    /// Plan file to write (default: standard output).
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = positive)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of datasets, with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1, value_parser = positive)]
    pub reps: usize,
    /// Output directory; files are named data_<seed>.csv.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    #[arg(value_enum)]
    pub name: DemoName,
    /// Combining method (berkeley only).
    #[arg(long, value_enum, default_value_t = MethodArg::Reml)]
    pub method: MethodArg,
    /// Directory for <name>.json.
    #[arg(long, default_value = ".")]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Berkeley,
    Stein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fixed,
    Dl,
    Reml,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fixed => Method::Fixed,
            MethodArg::Dl => Method::Dl,
            MethodArg::Reml => Method::Reml,
        }
    }
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn open_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e: std::num::ParseFloatError| e.to_string())?;
    if v > 0.0 && v < 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1)"))
    }
}
