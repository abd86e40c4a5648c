//! Benchmark toolkit for graph stores used as routing engines.

pub mod backend;
pub mod dataset;
pub mod graphcore;
pub mod mazegen;
pub mod report;
pub mod roadnet;
pub mod workload;

pub use backend::{connect, Backend, BackendConfig, BackendError, BackendHandle};
pub use dataset::{GraphDataset, NodeId, Weight, WeightedEdge};
pub use graphcore::{GraphError, Path, ReferenceStore};
pub use mazegen::{CostDistribution, Dimensionality, GridMaze, GridSpec};
pub use report::{ResultRow, SweepParameter};
pub use workload::{run_test, CacheState, Phase, QueryType, RunConfig, RunOutcome, WorkloadKind};
