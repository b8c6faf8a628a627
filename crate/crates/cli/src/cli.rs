//! Command-line surface. Defaults that describe the experiment itself
//! (repeats, weight, genetic-operator rates) are applied during spec
//! resolution so explicit and defaulted values can be told apart; flags
//! that only steer execution (`--jobs`) default here.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;

use crate::spec::{Model, Norm, Optimizer};
use crate::{calibrate, compare, genland, report, run, sweep};

#[derive(Parser)]
#[command(
    name = "mmo",
    version,
    about = "Configuration-tuning experiments with meta multi-objectivization"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Run seeded tuning repeats and write a results file plus run traces.
    Run(RunArgs),
    /// Compare two results files on the same case.
    Compare(CompareArgs),
    /// Tune the mmo weight over a list of values and pick the best.
    SweepWeights(SweepArgs),
    /// Generate a synthetic landscape and write its manifest.
    GenLandscape(GenArgs),
    /// Find the smallest budget at which tuning outcomes stabilize.
    CalibrateBudget(CalibrateArgs),
    /// Aggregate comparison rows into win/tie/loss counts.
    Report(ReportArgs),
}

#[derive(Args)]
pub struct SourceArgs {
    /// Measured configuration table (CSV in loader grammar).
    #[arg(long, value_name = "CSV")]
    pub dataset: Option<PathBuf>,
    /// Synthetic landscape manifest or spec (JSON).
    #[arg(long, value_name = "JSON")]
    pub landscape: Option<PathBuf>,
    /// Target objective column (datasets only).
    #[arg(long)]
    pub target: Option<String>,
    /// Auxiliary objective column (datasets only).
    #[arg(long)]
    pub aux: Option<String>,
}

#[derive(Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Objective model; defaults to mmo for nsga2 and single elsewhere.
    #[arg(long)]
    pub model: Option<Model>,
    /// Normalization bounds for multi-objective models (default population).
    #[arg(long)]
    pub norm: Option<Norm>,
    /// Auxiliary weight of the mmo model (default 1).
    #[arg(long)]
    pub weight: Option<f64>,
    #[arg(long)]
    pub optimizer: Optimizer,
    /// Distinct-measurement budget per run.
    #[arg(long)]
    pub budget: usize,
    /// Population size for nsga2/soga (default 50).
    #[arg(long)]
    pub pop: Option<usize>,
    /// Independent runs (default 50); run i uses seed + i.
    #[arg(long)]
    pub repeats: Option<usize>,
    /// Base seed (default 1).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Per-option mutation rate for nsga2/soga (default 0.1).
    #[arg(long)]
    pub mutation_rate: Option<f64>,
    /// Crossover rate for nsga2/soga (default 0.9).
    #[arg(long)]
    pub crossover_rate: Option<f64>,
    /// Initial random samples for flash/flash-mmo (default 30).
    #[arg(long)]
    pub flash_k: Option<usize>,
    /// Surrogate evaluations per acquisition round (default 1000).
    #[arg(long)]
    pub flash_evals: Option<usize>,
    /// Results file; traces go to the sibling `<stem>.trace.csv`.
    #[arg(long)]
    pub out: PathBuf,
    /// Worker threads for repeats; output is identical at any setting.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args)]
pub struct CompareArgs {
    /// Results file of the candidate tuner.
    pub candidate: PathBuf,
    /// Results file of the baseline tuner.
    pub baseline: PathBuf,
    /// Paired test (signed-rank) instead of independent groups (rank-sum).
    #[arg(long)]
    pub paired: bool,
    /// Also compare budget use from the sibling trace files.
    #[arg(long)]
    pub speedup: bool,
    /// Override the candidate label in the emitted row.
    #[arg(long)]
    pub candidate_label: Option<String>,
    /// Override the baseline label in the emitted row.
    #[arg(long)]
    pub baseline_label: Option<String>,
    /// Write the comparison row to a .csv or .json file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Weights to sweep (default 0.01,0.1,0.3,0.5,0.7,0.9,1,10).
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// Normalization bounds (default global, the weight-sensitive variant).
    #[arg(long)]
    pub norm: Option<Norm>,
    #[arg(long)]
    pub budget: usize,
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also find the smallest budget share that picks the same weight.
    #[arg(long)]
    pub proportions: bool,
    /// Write the per-weight table to a CSV file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(long)]
    pub seed: u64,
    /// Level count per option, e.g. 8,8,8,6.
    #[arg(long, value_delimiter = ',', required = true)]
    pub levels: Vec<usize>,
    /// Gaussian depressions in the target surface (default 20).
    #[arg(long, default_value_t = 20)]
    pub bumps: usize,
    /// Amplitude of the rugged perturbation (default 0.8).
    #[arg(long, default_value_t = 0.8)]
    pub ruggedness: f64,
    /// Auxiliary-target relationship (default mixed).
    #[arg(long, value_enum, default_value_t = genland::CorrelationArg::Mixed)]
    pub correlation: genland::CorrelationArg,
    /// Manifest output path (JSON).
    #[arg(long)]
    pub out: PathBuf,
    /// Also export the full measurement table (CSV).
    #[arg(long)]
    pub dataset_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CalibrateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Tuners whose outcomes must all stabilize (default soga,nsga2).
    #[arg(long, value_delimiter = ',')]
    pub optimizers: Option<Vec<Optimizer>>,
    /// Budget grid step (default 100).
    #[arg(long, default_value_t = 100)]
    pub step: usize,
    /// Largest grid budget (default min(3000, space size)).
    #[arg(long)]
    pub max: Option<usize>,
    /// Runs per tuner per budget (default 10).
    #[arg(long)]
    pub repeats: Option<usize>,
    #[arg(long)]
    pub pop: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write per-budget change fractions to a CSV file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Args)]
pub struct ReportArgs {
    /// Comparison row files written by `compare --out`.
    #[arg(required = true)]
    pub rows: Vec<PathBuf>,
    /// Write the merged table and tallies to a .csv or .json file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn dispatch(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run(args) => run::cmd_run(args),
        Command::Compare(args) => compare::cmd_compare(args),
        Command::SweepWeights(args) => sweep::cmd_sweep(args),
        Command::GenLandscape(args) => genland::cmd_gen(args),
        Command::CalibrateBudget(args) => calibrate::cmd_calibrate(args),
        Command::Report(args) => report::cmd_report(args),
    }
}
