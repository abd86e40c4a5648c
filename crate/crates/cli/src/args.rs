use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grb_core::mazegen::{CostDistribution, Dimensionality, GridSpec};
use grb_core::workload::DEFAULT_NODES;
use grb_core::{CacheState, QueryType, RunConfig, WorkloadKind};

use crate::CliError;

/// Environment variable naming the default backend config file.
pub const BACKEND_ENV: &str = "GRB_BACKEND_CONFIG";

#[derive(Parser, Debug)]
#[command(
    name = "grb",
    version,
    about = "Benchmark graph stores as routing engines on synthetic mazes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a maze dataset as nodes.csv and edges.csv.
    Generate(GenerateArgs),
    /// Run one configuration and append its rows to results.csv.
    Bench(BenchArgs),
    /// Run a sweep suite (built-in if no file is given) and plot each sweep.
    Suite(SuiteArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DistKind {
    Uniform,
    Beta,
}

#[derive(Args, Debug, Clone)]
pub struct MazeArgs {
    /// Maze dimensionality.
    #[arg(long, default_value = "2d")]
    pub dim: Dimensionality,
    /// Side lengths, `N` or `N,N[,N]`.
    #[arg(long, conflicts_with = "nodes")]
    pub side: Option<String>,
    /// Approximate cell count; sides are derived from it.
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Cell cost distribution.
    #[arg(long, value_enum, default_value = "beta")]
    pub dist: DistKind,
    /// Beta shape parameter alpha.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Beta shape parameter beta.
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl MazeArgs {
    pub fn grid(&self) -> Result<GridSpec, CliError> {
        let spec = match (&self.side, self.nodes) {
            (Some(side), _) => GridSpec::parse_sides(self.dim, side),
            (None, Some(n)) => GridSpec::from_node_count(self.dim, n),
            (None, None) => GridSpec::from_node_count(self.dim, DEFAULT_NODES),
        };
        spec.map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn distribution(&self) -> Result<CostDistribution, CliError> {
        match self.dist {
            DistKind::Uniform if self.alpha.is_some() || self.beta.is_some() => Err(CliError::Usage(
                "--alpha/--beta only apply to --dist beta".into(),
            )),
            DistKind::Uniform => Ok(CostDistribution::uniform()),
            DistKind::Beta => {
                let (a, b) = CostDistribution::default_beta()
                    .beta_params()
                    .expect("default is beta");
                CostDistribution::beta(self.alpha.unwrap_or(a), self.beta.unwrap_or(b))
                    .map_err(|e| CliError::Usage(e.to_string()))
            }
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub maze: MazeArgs,
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct BenchArgs {
    #[command(flatten)]
    pub maze: MazeArgs,
    #[arg(long, default_value = "path_search")]
    pub workload: WorkloadKind,
    #[arg(long, default_value = "bulk")]
    pub query_type: QueryType,
    /// Submit from `--workers` parallel lanes.
    #[arg(long)]
    pub concurrent: bool,
    #[arg(long, default_value_t = grb_core::workload::DEFAULT_WORKERS)]
    pub workers: usize,
    #[arg(long, default_value = "warm")]
    pub cache: CacheState,
    #[arg(long, default_value_t = grb_core::workload::DEFAULT_REPETITIONS)]
    pub reps: usize,
    /// Measured searches or updates per repetition.
    #[arg(long, default_value_t = 1)]
    pub queries: usize,
    /// Start/goal distance in cells (default: half the shortest side).
    #[arg(long)]
    pub euclid: Option<f64>,
    /// `reference` or a backend config file; defaults to $GRB_BACKEND_CONFIG.
    #[arg(long)]
    pub backend: Option<String>,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

impl BenchArgs {
    pub fn run_config(&self) -> Result<RunConfig, CliError> {
        let config = RunConfig {
            grid: self.maze.grid()?,
            cost_distribution: self.maze.distribution()?,
            concurrency: self.concurrent,
            cache_state: self.cache,
            query_type: self.query_type,
            workload: self.workload,
            repetitions: self.reps,
            workers: self.workers,
            queries: self.queries,
            euclid: self.euclid,
            seed: self.maze.seed,
        };
        config.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(config)
    }
}

#[derive(Args, Debug, Clone)]
pub struct SuiteArgs {
    /// Suite description (TOML). Without it the four standard sweeps run.
    pub file: Option<PathBuf>,
    /// Backends to compare; repeatable. Overrides the suite file.
    #[arg(long)]
    pub backend: Vec<String>,
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Logarithmic time axis in plots.
    #[arg(long)]
    pub log_time: bool,
}

/// Backend argument, falling back to the environment and then the
/// reference engine.
pub fn backend_arg(arg: Option<&str>) -> String {
    match arg {
        Some(a) => a.to_string(),
        None => std::env::var(BACKEND_ENV)
            .ok()
            .filter(|v| !v.is_empty())
            .unwrap_or_else(|| "reference".into()),
    }
}
