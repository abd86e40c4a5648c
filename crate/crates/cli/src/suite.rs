//! Sweep suites: one parameter varied per sweep, all others at the standard
//! values.
//!
//! ```toml
//! reps = 10
//! seed = 0
//! backends = ["reference", "neo4j.toml"]
//!
//! [[sweep]]
//! parameter = "size"
//! values = [50, 100, 190]
//! workloads = ["path_search"]
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use grb_core::mazegen::{CostDistribution, Dimensionality, GridSpec};
use grb_core::report::{render_plot, write_results, PlotOptions, ResultRow, SweepParameter};
use grb_core::workload::{run_test, DEFAULT_REPETITIONS};
use grb_core::{BackendHandle, CacheState, QueryType, RunConfig, WorkloadKind};
use serde::Deserialize;

use crate::args::{backend_arg, SuiteArgs};
use crate::{backend_config, connect_backend, describe, outcome_rows, CliError, RESULTS_FILE};

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub values: Vec<String>,
    pub workloads: Vec<WorkloadKind>,
    /// Measured queries per repetition.
    pub queries: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteSpec {
    pub reps: usize,
    pub seed: u64,
    pub backends: Vec<String>,
    pub sweeps: Vec<Sweep>,
    pub log_time: bool,
}

/// One run of the matrix: a sweep value applied to the standard config.
#[derive(Clone, Debug)]
pub struct Cell {
    pub sweep: usize,
    pub parameter: SweepParameter,
    pub value: String,
    pub config: RunConfig,
}

#[derive(Debug)]
pub struct SuiteReport {
    pub rows: Vec<ResultRow>,
    pub csv: PathBuf,
    pub plots: Vec<PathBuf>,
    pub failures: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSuite {
    reps: Option<usize>,
    seed: Option<u64>,
    backends: Option<Vec<String>>,
    log_time: Option<bool>,
    #[serde(default)]
    sweep: Vec<RawSweep>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    parameter: String,
    values: Vec<toml::Value>,
    workloads: Option<Vec<String>>,
    queries: Option<usize>,
}

fn usage(m: impl Into<String>) -> CliError {
    CliError::Usage(m.into())
}

/// Standard cell count per dimensionality, chosen so every maze has about
/// 4·10^4 directed edges.
pub fn standard_sides(dim: Dimensionality) -> &'static str {
    match dim {
        Dimensionality::OneDStar => "40000",
        Dimensionality::OneD => "20000",
        Dimensionality::TwoD => "100",
        Dimensionality::ThreeD => "19",
    }
}

impl SuiteSpec {
    /// Concurrency, cache, dimensionality and size sweeps of path search.
    pub fn standard() -> SuiteSpec {
        let sweep = |parameter, values: &[&str], queries| Sweep {
            parameter,
            values: values.iter().map(|v| v.to_string()).collect(),
            workloads: vec![WorkloadKind::PathSearch],
            queries,
        };
        SuiteSpec {
            reps: DEFAULT_REPETITIONS,
            seed: 0,
            backends: vec!["reference".into()],
            sweeps: vec![
                sweep(SweepParameter::Concurrency, &["sequential", "concurrent"], 10),
                sweep(SweepParameter::Cache, &["cold", "warm", "warmer", "hot"], 1),
                sweep(
                    SweepParameter::Dimensionality,
                    &["1dstar:40000", "1d:20000", "2d:100", "3d:19"],
                    1,
                ),
                sweep(SweepParameter::Size, &["50", "100", "190"], 1),
            ],
            log_time: false,
        }
    }

    pub fn parse(text: &str) -> Result<SuiteSpec, CliError> {
        let raw: RawSuite = toml::from_str(text).map_err(|e| usage(format!("invalid suite: {e}")))?;
        if raw.sweep.is_empty() {
            return Err(usage("suite defines no [[sweep]]"));
        }
        let sweeps = raw
            .sweep
            .into_iter()
            .map(|s| {
                let parameter: SweepParameter = s.parameter.parse().map_err(usage)?;
                let values = s
                    .values
                    .iter()
                    .map(|v| match v {
                        toml::Value::String(s) => Ok(s.clone()),
                        toml::Value::Integer(i) => Ok(i.to_string()),
                        toml::Value::Float(f) => Ok(f.to_string()),
                        toml::Value::Boolean(b) => Ok(b.to_string()),
                        other => Err(usage(format!("unsupported sweep value {other}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                if values.is_empty() {
                    return Err(usage(format!("sweep `{parameter}` has no values")));
                }
                let workloads = match s.workloads {
                    None => vec![WorkloadKind::PathSearch],
                    Some(w) if w.is_empty() => return Err(usage(format!("sweep `{parameter}` has no workloads"))),
                    Some(w) => w
                        .iter()
                        .map(|w| w.parse().map_err(|e: grb_core::workload::WorkloadError| usage(e.to_string())))
                        .collect::<Result<Vec<_>, _>>()?,
                };
                Ok(Sweep {
                    parameter,
                    values,
                    workloads,
                    queries: s.queries.unwrap_or(1),
                })
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let backends = raw.backends.unwrap_or_else(|| vec!["reference".into()]);
        if backends.is_empty() {
            return Err(usage("suite lists no backends"));
        }
        Ok(SuiteSpec {
            reps: raw.reps.unwrap_or(DEFAULT_REPETITIONS),
            seed: raw.seed.unwrap_or(0),
            backends,
            sweeps,
            log_time: raw.log_time.unwrap_or(false),
        })
    }

    pub fn load(path: &Path) -> Result<SuiteSpec, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Suite file (or the standard suite) with command-line overrides.
    pub fn from_args(args: &SuiteArgs) -> Result<SuiteSpec, CliError> {
        let mut spec = match &args.file {
            Some(p) => Self::load(p)?,
            None => {
                let mut s = Self::standard();
                s.backends = vec![backend_arg(None)];
                s
            }
        };
        if !args.backend.is_empty() {
            spec.backends = args.backend.clone();
        }
        if let Some(r) = args.reps {
            spec.reps = r;
        }
        if let Some(s) = args.seed {
            spec.seed = s;
        }
        spec.log_time |= args.log_time;
        Ok(spec)
    }

    pub fn cells(&self) -> Result<Vec<Cell>, CliError> {
        let mut cells = Vec::new();
        for (i, sweep) in self.sweeps.iter().enumerate() {
            for &workload in &sweep.workloads {
                for value in &sweep.values {
                    let mut config = RunConfig {
                        workload,
                        repetitions: self.reps,
                        seed: self.seed,
                        queries: sweep.queries,
                        ..RunConfig::default()
                    };
                    apply(sweep.parameter, value, &mut config)?;
                    config.validate().map_err(|e| usage(e.to_string()))?;
                    cells.push(Cell {
                        sweep: i,
                        parameter: sweep.parameter,
                        value: value.clone(),
                        config,
                    });
                }
            }
        }
        Ok(cells)
    }
}

fn apply(parameter: SweepParameter, value: &str, config: &mut RunConfig) -> Result<(), CliError> {
    let bad = |e: String| usage(format!("{parameter} value `{value}`: {e}"));
    match parameter {
        SweepParameter::Concurrency => {
            config.concurrency = match value.trim().to_ascii_lowercase().as_str() {
                "sequential" | "false" | "no" => false,
                "concurrent" | "true" | "yes" => true,
                _ => return Err(bad("expected sequential or concurrent".into())),
            }
        }
        SweepParameter::Cache => {
            config.cache_state = value.parse::<CacheState>().map_err(|e| bad(e.to_string()))?
        }
        SweepParameter::Dimensionality => {
            let (dim, sides) = value.split_once(':').unwrap_or((value, ""));
            let dim: Dimensionality = dim.parse().map_err(|e: grb_core::mazegen::MazeError| bad(e.to_string()))?;
            let sides = if sides.is_empty() { standard_sides(dim) } else { sides };
            config.grid = GridSpec::parse_sides(dim, sides).map_err(|e| bad(e.to_string()))?;
        }
        SweepParameter::Size => {
            config.grid =
                GridSpec::parse_sides(config.dimensionality(), value).map_err(|e| bad(e.to_string()))?
        }
        SweepParameter::Distribution => {
            config.cost_distribution =
                value.parse::<CostDistribution>().map_err(|e| bad(e.to_string()))?
        }
        SweepParameter::QueryType => {
            config.query_type = value.parse::<QueryType>().map_err(|e| bad(e.to_string()))?
        }
    }
    Ok(())
}

/// Runs every cell against every backend, one at a time, then writes
/// `results.csv` and one plot per sweep and measured phase into `out`.
/// Failed cells are skipped and reported; the remaining cells still run.
pub fn cmd_suite(spec: &SuiteSpec, out: &Path) -> Result<SuiteReport, CliError> {
    let cells = spec.cells()?;
    if cells.is_empty() {
        return Err(usage("suite has no cells"));
    }
    let configs = spec
        .backends
        .iter()
        .map(|b| backend_config(b))
        .collect::<Result<Vec<_>, _>>()?;

    let mut failures = Vec::new();
    let handles: Vec<Option<BackendHandle>> = configs
        .iter()
        .map(|c| match connect_backend(c) {
            Ok(h) => Some(h),
            Err(e) => {
                eprintln!("grb: {e}");
                None
            }
        })
        .collect();

    // Rows per cell in run order, tagged with their sweep.
    let mut tagged: Vec<(usize, ResultRow)> = Vec::new();
    let total = cells.len() * configs.len();
    let mut n = 0;
    for cell in &cells {
        for (config, handle) in configs.iter().zip(&handles) {
            n += 1;
            let label = config.label();
            let Some(handle) = handle else {
                failures.push(format!("{}={} on {label}: not connected", cell.parameter, cell.value));
                continue;
            };
            let tag = format!("[{n}/{total}] {}={} {} on {label}", cell.parameter, cell.value, cell.config.workload);
            match run_test(&cell.config, handle) {
                Ok(outcome) if outcome.is_complete() => {
                    for row in outcome_rows(label, &outcome) {
                        if let Some(s) = outcome.summary(row.workload) {
                            println!("{tag}: {}: {}", row.workload, describe(s));
                        }
                        tagged.push((cell.sweep, row));
                    }
                }
                Ok(outcome) => {
                    let e = outcome.error.unwrap_or_default();
                    eprintln!("{tag}: failed: {e}");
                    failures.push(format!("{tag}: {e}"));
                }
                Err(e) => {
                    eprintln!("{tag}: failed: {e}");
                    failures.push(format!("{tag}: {e}"));
                }
            }
        }
    }

    let rows: Vec<ResultRow> = tagged.iter().map(|(_, r)| r.clone()).collect();
    let csv = out.join(RESULTS_FILE);
    let mut plots = Vec::new();
    if !rows.is_empty() {
        write_results(&rows, &csv).map_err(|e| usage(format!("cannot write {}: {e}", csv.display())))?;
        println!("results: {}", csv.display());

        let mut groups: BTreeMap<(usize, &'static str), Vec<ResultRow>> = BTreeMap::new();
        for (sweep, row) in &tagged {
            groups.entry((*sweep, row.workload.as_str())).or_default().push(row.clone());
        }
        let opts = PlotOptions {
            log_time: spec.log_time,
        };
        let mut names: BTreeMap<String, usize> = BTreeMap::new();
        for ((sweep, phase), group) in &groups {
            let param = spec.sweeps[*sweep].parameter;
            let base = format!("{param}_{phase}");
            let k = names.entry(base.clone()).or_insert(0);
            *k += 1;
            let name = if *k == 1 { format!("{base}.svg") } else { format!("{base}_{k}.svg") };
            let path = out.join(name);
            render_plot(group, param, &path, opts)
                .map_err(|e| usage(format!("cannot plot {}: {e}", path.display())))?;
            println!("plot: {}", path.display());
            plots.push(path);
        }
    }

    let report = SuiteReport {
        rows,
        csv,
        plots,
        failures,
    };
    if report.failures.is_empty() {
        Ok(report)
    } else {
        Err(CliError::Partial(format!(
            "{} of {total} cells failed: {}",
            report.failures.len(),
            report.failures.join("; ")
        )))
    }
}
