//! Result rows, the results CSV, and SVG bar charts for parameter sweeps.

mod plot;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::mazegen::{CostDistribution, Dimensionality};
use crate::workload::{show_stddev, CacheState, Phase, QueryType, RunConfig, Summary};

pub use plot::{render_plot, render_svg, PlotOptions};

pub const CSV_HEADER: [&str; 12] = [
    "backend",
    "workload",
    "nodes",
    "dimensionality",
    "distribution",
    "concurrency",
    "cache",
    "query_type",
    "mean_time_s",
    "stddev_time_s",
    "mean_ram_b",
    "stddev_ram_b",
];

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("no rows to write")]
    Empty,
    #[error("line {line}: {msg}")]
    Parse { line: u64, msg: String },
    #[error("rows mix workloads `{0}` and `{1}`")]
    MixedWorkloads(String, String),
    #[error("rows differ in {0}, which is not the swept parameter")]
    Inconsistent(&'static str),
}

/// One cell of the test matrix for one backend.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub backend: String,
    pub workload: Phase,
    pub nodes: usize,
    pub dimensionality: Dimensionality,
    pub distribution: CostDistribution,
    pub concurrency: bool,
    pub cache: CacheState,
    pub query_type: QueryType,
    pub mean_time_s: f64,
    pub stddev_time_s: f64,
    pub mean_ram_b: Option<f64>,
    pub stddev_ram_b: Option<f64>,
}

impl ResultRow {
    pub fn from_summary(backend: &str, phase: Phase, config: &RunConfig, s: &Summary) -> Self {
        ResultRow {
            backend: backend.to_string(),
            workload: phase,
            nodes: config.nodes(),
            dimensionality: config.dimensionality(),
            distribution: config.cost_distribution,
            concurrency: config.concurrency,
            cache: config.cache_state,
            query_type: config.query_type,
            mean_time_s: s.mean_time,
            stddev_time_s: s.stddev_time,
            mean_ram_b: s.mean_ram,
            stddev_ram_b: s.stddev_ram,
        }
    }

    pub fn show_stddev_time(&self) -> bool {
        show_stddev(self.mean_time_s, self.stddev_time_s)
    }

    pub fn show_stddev_ram(&self) -> bool {
        matches!((self.mean_ram_b, self.stddev_ram_b), (Some(m), Some(s)) if show_stddev(m, s))
    }

    fn record(&self) -> Vec<String> {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        vec![
            self.backend.clone(),
            self.workload.to_string(),
            self.nodes.to_string(),
            self.dimensionality.to_string(),
            self.distribution.to_string(),
            self.concurrency.to_string(),
            self.cache.to_string(),
            self.query_type.to_string(),
            self.mean_time_s.to_string(),
            self.stddev_time_s.to_string(),
            opt(self.mean_ram_b),
            opt(self.stddev_ram_b),
        ]
    }

    fn parse_record(rec: &csv::StringRecord, line: u64) -> Result<Self, ReportError> {
        let err = |msg: String| ReportError::Parse { line, msg };
        if rec.len() != CSV_HEADER.len() {
            return Err(err(format!("expected {} fields, found {}", CSV_HEADER.len(), rec.len())));
        }
        fn field<T: FromStr>(rec: &csv::StringRecord, i: usize, line: u64) -> Result<T, ReportError>
        where
            T::Err: fmt::Display,
        {
            rec[i].parse().map_err(|e: T::Err| ReportError::Parse {
                line,
                msg: format!("{}: {e}", CSV_HEADER[i]),
            })
        }
        let opt = |i: usize| -> Result<Option<f64>, ReportError> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                field(rec, i, line).map(Some)
            }
        };
        Ok(ResultRow {
            backend: rec[0].to_string(),
            workload: Phase::parse(&rec[1]).ok_or_else(|| err(format!("unknown workload `{}`", &rec[1])))?,
            nodes: field(rec, 2, line)?,
            dimensionality: field(rec, 3, line)?,
            distribution: field(rec, 4, line)?,
            concurrency: field(rec, 5, line)?,
            cache: field(rec, 6, line)?,
            query_type: field(rec, 7, line)?,
            mean_time_s: field(rec, 8, line)?,
            stddev_time_s: field(rec, 9, line)?,
            mean_ram_b: opt(10)?,
            stddev_ram_b: opt(11)?,
        })
    }
}

/// Sorts rows by `(workload, backend, nodes)`; the sort is stable.
pub fn sort_rows(rows: &mut [ResultRow]) {
    rows.sort_by(|a, b| {
        (a.workload.as_str(), &a.backend, a.nodes).cmp(&(b.workload.as_str(), &b.backend, b.nodes))
    });
}

pub fn write_results(rows: &[ResultRow], path: &Path) -> Result<(), ReportError> {
    if rows.is_empty() {
        return Err(ReportError::Empty);
    }
    let mut sorted = rows.to_vec();
    sort_rows(&mut sorted);
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_HEADER)?;
    for r in &sorted {
        w.write_record(r.record())?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_results(path: &Path) -> Result<Vec<ResultRow>, ReportError> {
    let mut rdr = csv::Reader::from_path(path)?;
    let header = rdr.headers()?.clone();
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(ReportError::Parse {
            line: 1,
            msg: format!("unexpected header `{}`", header.iter().collect::<Vec<_>>().join(",")),
        });
    }
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            let line = rec.position().map_or(0, |p| p.line());
            ResultRow::parse_record(&rec, line)
        })
        .collect()
}

/// Reads existing rows (if any), adds `rows`, and rewrites the file sorted.
pub fn append_results(rows: &[ResultRow], path: &Path) -> Result<(), ReportError> {
    let mut all = if path.exists() {
        read_results(path)?
    } else {
        Vec::new()
    };
    all.extend_from_slice(rows);
    write_results(&all, path)
}

/// Parameter varied along a plot's x axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SweepParameter {
    Concurrency,
    Cache,
    Dimensionality,
    Size,
    Distribution,
    QueryType,
}

impl SweepParameter {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParameter::Concurrency => "concurrency",
            SweepParameter::Cache => "cache",
            SweepParameter::Dimensionality => "dimensionality",
            SweepParameter::Size => "size",
            SweepParameter::Distribution => "distribution",
            SweepParameter::QueryType => "query_type",
        }
    }

    pub fn value_label(self, row: &ResultRow) -> String {
        match self {
            SweepParameter::Concurrency => {
                if row.concurrency { "concurrent" } else { "sequential" }.to_string()
            }
            SweepParameter::Cache => row.cache.to_string(),
            SweepParameter::Dimensionality => format!("{} ({} nodes)", row.dimensionality, row.nodes),
            SweepParameter::Size => format!("{} nodes", row.nodes),
            SweepParameter::Distribution => row.distribution.to_string(),
            SweepParameter::QueryType => row.query_type.to_string(),
        }
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            SweepParameter::Concurrency,
            SweepParameter::Cache,
            SweepParameter::Dimensionality,
            SweepParameter::Size,
            SweepParameter::Distribution,
            SweepParameter::QueryType,
        ]
        .into_iter()
        .find(|p| p.as_str() == s.trim())
        .ok_or_else(|| format!("unknown sweep parameter `{s}`"))
    }
}

/// Rows may differ only in backend and the swept parameter.
pub(crate) fn check_consistent(rows: &[ResultRow], sweep: SweepParameter) -> Result<(), ReportError> {
    let Some(first) = rows.first() else {
        return Err(ReportError::Empty);
    };
    for r in rows {
        if r.workload != first.workload {
            return Err(ReportError::MixedWorkloads(
                first.workload.to_string(),
                r.workload.to_string(),
            ));
        }
        let sized = matches!(sweep, SweepParameter::Size | SweepParameter::Dimensionality);
        let checks: [(&'static str, bool, bool); 6] = [
            ("nodes", r.nodes == first.nodes, sized),
            (
                "dimensionality",
                r.dimensionality == first.dimensionality,
                sweep == SweepParameter::Dimensionality,
            ),
            (
                "distribution",
                r.distribution == first.distribution,
                sweep == SweepParameter::Distribution,
            ),
            (
                "concurrency",
                r.concurrency == first.concurrency,
                sweep == SweepParameter::Concurrency,
            ),
            ("cache", r.cache == first.cache, sweep == SweepParameter::Cache),
            (
                "query_type",
                r.query_type == first.query_type,
                sweep == SweepParameter::QueryType,
            ),
        ];
        for (name, same, swept) in checks {
            if !same && !swept {
                return Err(ReportError::Inconsistent(name));
            }
        }
    }
    Ok(())
}
