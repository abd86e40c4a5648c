//! Graph-store interface shared by every engine under test.
//!
//! [`Backend`] is the operation-level contract. [`connect`] turns a
//! [`BackendConfig`] into a [`BackendHandle`], either around the in-process
//! reference store or around a template-driven HTTP adapter.

mod config;
mod external;
mod instrumented;
mod reference;
pub mod template;

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use thiserror::Error;

use crate::dataset::{GraphDataset, NodeId, Weight, WeightedEdge};
use crate::graphcore::{GraphError, Path};

pub use config::{
    BackendConfig, ExternalConfig, RamProbeConfig, ResponseMapping, Templates, DEFAULT_TIMEOUT,
};
pub use external::ExternalBackend;
pub use instrumented::{Instrumented, OpKind};
pub use reference::ReferenceBackend;

#[derive(Debug, Error)]
pub enum BackendError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("transport error: {0}")]
    Transport(String),
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("query failed (status {status:?}): {message}")]
    Query { status: Option<u16>, message: String },
    #[error("unexpected response: {0}")]
    Response(String),
    #[error("reset failed: {0}")]
    Reset(String),
    #[error("operation not supported by this backend: {0}")]
    Unsupported(&'static str),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

impl BackendError {
    /// Connection-level failure as opposed to a rejected query.
    pub fn is_transport(&self) -> bool {
        matches!(self, BackendError::Transport(_) | BackendError::Auth(_))
    }
}

/// Operations every engine under test implements. All methods take `&self`
/// and must tolerate concurrent callers.
pub trait Backend: Send + Sync {
    fn label(&self) -> &str;
    fn bulk_import(&self, g: &GraphDataset) -> Result<(), BackendError>;
    fn insert_node(&self, id: NodeId) -> Result<(), BackendError>;
    fn insert_edge(&self, e: WeightedEdge) -> Result<(), BackendError>;
    fn shortest_path(&self, start: NodeId, goal: NodeId) -> Result<Option<Path>, BackendError>;
    fn update_edge_weight(&self, from: NodeId, to: NodeId, weight: Weight)
        -> Result<(), BackendError>;
    fn delete_edge(&self, from: NodeId, to: NodeId) -> Result<(), BackendError>;
    /// Clears caches. Stored graph content must survive.
    fn reset(&self) -> Result<(), BackendError>;
    /// Removes all stored content so the next dataset can be loaded.
    fn clear(&self) -> Result<(), BackendError>;
    /// Current memory footprint in bytes, `None` when no probe is available.
    fn ram_probe(&self) -> Option<u64>;
}

#[derive(Clone, Copy, Debug)]
pub enum Operation<'a> {
    BulkImport(&'a GraphDataset),
    InsertNode(NodeId),
    InsertEdge(WeightedEdge),
    ShortestPath { start: NodeId, goal: NodeId },
    UpdateEdgeWeight { from: NodeId, to: NodeId, weight: Weight },
    DeleteEdge { from: NodeId, to: NodeId },
    Reset,
    Clear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OpOutput {
    Ack,
    Path(Option<Path>),
}

/// Shareable connection to one logical database.
#[derive(Clone)]
pub struct BackendHandle {
    config: Option<BackendConfig>,
    inner: Arc<dyn Backend>,
}

impl BackendHandle {
    /// Wraps an arbitrary backend implementation.
    pub fn new(backend: Arc<dyn Backend>) -> Self {
        BackendHandle {
            config: None,
            inner: backend,
        }
    }

    pub fn config(&self) -> Option<&BackendConfig> {
        self.config.as_ref()
    }

    pub fn backend(&self) -> &Arc<dyn Backend> {
        &self.inner
    }

    pub fn dispatch(&self, op: Operation<'_>) -> Result<OpOutput, BackendError> {
        let b = &self.inner;
        match op {
            Operation::BulkImport(g) => b.bulk_import(g).map(|_| OpOutput::Ack),
            Operation::InsertNode(id) => b.insert_node(id).map(|_| OpOutput::Ack),
            Operation::InsertEdge(e) => b.insert_edge(e).map(|_| OpOutput::Ack),
            Operation::ShortestPath { start, goal } => b.shortest_path(start, goal).map(OpOutput::Path),
            Operation::UpdateEdgeWeight { from, to, weight } => {
                b.update_edge_weight(from, to, weight).map(|_| OpOutput::Ack)
            }
            Operation::DeleteEdge { from, to } => b.delete_edge(from, to).map(|_| OpOutput::Ack),
            Operation::Reset => b.reset().map(|_| OpOutput::Ack),
            Operation::Clear => b.clear().map(|_| OpOutput::Ack),
        }
    }
}

impl Deref for BackendHandle {
    type Target = dyn Backend;

    fn deref(&self) -> &Self::Target {
        &*self.inner
    }
}

impl fmt::Debug for BackendHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BackendHandle")
            .field("label", &self.inner.label())
            .finish()
    }
}

pub fn connect(config: &BackendConfig) -> Result<BackendHandle, BackendError> {
    let inner: Arc<dyn Backend> = match config {
        BackendConfig::Reference => Arc::new(ReferenceBackend::new()),
        BackendConfig::External(c) => Arc::new(ExternalBackend::connect(c.clone())?),
    };
    Ok(BackendHandle {
        config: Some(config.clone()),
        inner,
    })
}

/// Resident set size of this process, read from `/proc/self/status`.
pub fn process_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmRSS:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_dispatch_passes_through() {
        let h = connect(&BackendConfig::Reference).unwrap();
        assert_eq!(h.label(), "reference");
        let g = GraphDataset::new(
            vec![NodeId(0), NodeId(1)],
            vec![WeightedEdge::new(0, 1, 3)],
        );
        assert_eq!(h.dispatch(Operation::BulkImport(&g)).unwrap(), OpOutput::Ack);
        let out = h
            .dispatch(Operation::ShortestPath {
                start: NodeId(0),
                goal: NodeId(1),
            })
            .unwrap();
        let OpOutput::Path(Some(p)) = out else {
            panic!("expected a path, got {out:?}");
        };
        assert_eq!(p.total_cost, 3);
        h.dispatch(Operation::Reset).unwrap();
        assert_eq!(
            h.dispatch(Operation::ShortestPath {
                start: NodeId(0),
                goal: NodeId(1)
            })
            .unwrap(),
            OpOutput::Path(Some(p))
        );
        h.dispatch(Operation::DeleteEdge {
            from: NodeId(0),
            to: NodeId(1),
        })
        .unwrap();
        assert!(matches!(
            h.dispatch(Operation::DeleteEdge {
                from: NodeId(0),
                to: NodeId(1)
            }),
            Err(BackendError::Graph(GraphError::UnknownEdge(..)))
        ));
    }

    #[test]
    fn reference_ram_probe_is_positive() {
        let h = connect(&BackendConfig::Reference).unwrap();
        if cfg!(target_os = "linux") {
            assert!(h.ram_probe().unwrap() > 0);
        }
    }
}
