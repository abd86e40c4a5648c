//! Test procedure: dataset generation, cache preparation, sequential or
//! concurrent submission, timing with peak-RAM sampling, and aggregation.

mod config;
mod driver;
mod measure;
mod stats;

use thiserror::Error;

use crate::backend::BackendError;
use crate::mazegen::MazeError;

pub use config::{
    CacheState, QueryType, RunConfig, WorkloadKind, DEFAULT_NODES, DEFAULT_REPETITIONS,
    DEFAULT_WORKERS,
};
pub use driver::{
    prepare_cache, repetition_data, run_test, Phase, PhaseResult, Repetition, RepetitionData,
    RouteStat, RunOutcome,
};
pub use measure::{
    measure, partition, round_robin, run_concurrent, run_lanes, Measurement, NoProbe, RamProbe,
    Timed, SAMPLE_INTERVAL,
};
pub use stats::{mean_stddev, show_stddev, summarize, Summary, STDDEV_DISPLAY_RATIO};

#[derive(Debug, Error)]
pub enum WorkloadError {
    #[error("invalid run configuration: {0}")]
    InvalidConfig(String),
    #[error("no measurements to summarize")]
    NoMeasurements,
    #[error(transparent)]
    Maze(#[from] MazeError),
    #[error(transparent)]
    Backend(#[from] BackendError),
}
