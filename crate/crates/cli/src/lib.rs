//! `grb` command-line driver: dataset generation, single benchmark runs and
//! sweep suites with plots.

pub mod args;
pub mod suite;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::Parser;
use grb_core::backend::{connect, BackendConfig, BackendError, BackendHandle};
use grb_core::mazegen::{generate_maze, maze_to_graph};
use grb_core::report::{append_results, ResultRow};
use grb_core::workload::{run_test, RunOutcome, Summary};

pub use args::{BenchArgs, Cli, Command, GenerateArgs, MazeArgs, SuiteArgs};
pub use suite::{cmd_suite, Cell, SuiteReport, SuiteSpec, Sweep};

pub const RESULTS_FILE: &str = "results.csv";

#[derive(Debug)]
pub enum CliError {
    /// Bad flags, config files or suite descriptions. Exit code 1.
    Usage(String),
    /// Backend unreachable or failing. Exit code 2.
    Backend(String),
    /// Some suite cells failed. Exit code 3.
    Partial(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Backend(_) => 2,
            CliError::Partial(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Backend(m) => write!(f, "backend error: {m}"),
            CliError::Partial(m) => write!(f, "suite incomplete: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    let result = match &cli.command {
        Command::Generate(a) => cmd_generate(a).map(|r| println!("{r}")),
        Command::Bench(a) => cmd_bench(a).map(drop),
        Command::Suite(a) => SuiteSpec::from_args(a).and_then(|spec| cmd_suite(&spec, &a.out).map(drop)),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("grb: {e}");
            e.exit_code()
        }
    }
}

/// Resolves `reference` or a config file path into a backend config.
pub fn backend_config(arg: &str) -> Result<BackendConfig, CliError> {
    if arg != "reference" && !Path::new(arg).is_file() {
        return Err(CliError::Usage(format!(
            "unknown backend `{arg}`: expected `reference` or a config file"
        )));
    }
    BackendConfig::from_arg(arg).map_err(|e| CliError::Usage(e.to_string()))
}

pub fn connect_backend(config: &BackendConfig) -> Result<BackendHandle, CliError> {
    connect(config).map_err(|e| match e {
        BackendError::Config(m) => CliError::Usage(m),
        other => CliError::Backend(format!("{}: {other}", config.label())),
    })
}

#[derive(Debug, Clone)]
pub struct GenerateReport {
    pub nodes: usize,
    pub edges: usize,
    pub seed: u64,
    pub dir: PathBuf,
}

impl fmt::Display for GenerateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} nodes, {} edges (seed {}) written to {}",
            self.nodes,
            self.edges,
            self.seed,
            self.dir.display()
        )
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<GenerateReport, CliError> {
    let grid = args.maze.grid()?;
    let dist = args.maze.distribution()?;
    let graph = maze_to_graph(&generate_maze(&grid, &dist, args.maze.seed));
    graph
        .save_dir(&args.out)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", args.out.display())))?;
    Ok(GenerateReport {
        nodes: graph.node_count(),
        edges: graph.edge_count(),
        seed: args.maze.seed,
        dir: args.out.clone(),
    })
}

/// One-line console rendering of a summary; the spread is shown only where
/// it passes the 1% rule.
pub fn describe(s: &Summary) -> String {
    let mut out = format!("mean {:.6} s", s.mean_time);
    if s.show_stddev_time {
        out += &format!(" ± {:.6} s", s.stddev_time);
    }
    match s.mean_ram {
        Some(m) => {
            out += &format!(", peak RAM {:.1} MiB", m / (1024.0 * 1024.0));
            if s.show_stddev_ram {
                out += &format!(" ± {:.1} MiB", s.stddev_ram.unwrap_or(0.0) / (1024.0 * 1024.0));
            }
        }
        None => out += ", peak RAM n/a",
    }
    out += &format!(" over {} runs", s.samples);
    out
}

/// Result rows of every phase that produced a summary.
pub fn outcome_rows(backend: &str, outcome: &RunOutcome) -> Vec<ResultRow> {
    outcome
        .phases
        .iter()
        .filter_map(|p| {
            p.summary
                .as_ref()
                .map(|s| ResultRow::from_summary(backend, p.phase, &outcome.config, s))
        })
        .collect()
}

pub fn cmd_bench(args: &BenchArgs) -> Result<Vec<ResultRow>, CliError> {
    let config = args.run_config()?;
    let backend = backend_config(&args::backend_arg(args.backend.as_deref()))?;
    let handle = connect_backend(&backend)?;
    println!(
        "{} on {} ({} nodes, {} {}, seed {})",
        config.workload,
        backend.label(),
        config.nodes(),
        config.dimensionality(),
        config.cost_distribution,
        config.seed
    );
    let outcome = run_test(&config, &handle).map_err(|e| match e {
        grb_core::workload::WorkloadError::Backend(b) => CliError::Backend(b.to_string()),
        other => CliError::Usage(other.to_string()),
    })?;
    for p in &outcome.phases {
        if let Some(s) = &p.summary {
            println!("  {}: {}", p.phase, describe(s));
        }
    }
    if let Some(err) = &outcome.error {
        return Err(CliError::Backend(err.clone()));
    }
    let rows = outcome_rows(backend.label(), &outcome);
    let path = args.out.join(RESULTS_FILE);
    append_results(&rows, &path)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("  rows appended to {}", path.display());
    Ok(rows)
}
