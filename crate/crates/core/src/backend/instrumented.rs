use std::sync::Mutex;

use super::{Backend, BackendError};
use crate::dataset::{GraphDataset, NodeId, Weight, WeightedEdge};
use crate::graphcore::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OpKind {
    BulkImport,
    InsertNode,
    InsertEdge,
    ShortestPath,
    UpdateEdgeWeight,
    DeleteEdge,
    Reset,
    Clear,
}

/// Delegating backend that records the sequence of operations it receives.
pub struct Instrumented<B> {
    inner: B,
    log: Mutex<Vec<OpKind>>,
}

impl<B: Backend> Instrumented<B> {
    pub fn new(inner: B) -> Self {
        Instrumented {
            inner,
            log: Mutex::new(Vec::new()),
        }
    }

    pub fn inner(&self) -> &B {
        &self.inner
    }

    pub fn log(&self) -> Vec<OpKind> {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).clone()
    }

    pub fn take_log(&self) -> Vec<OpKind> {
        std::mem::take(&mut *self.log.lock().unwrap_or_else(|e| e.into_inner()))
    }

    pub fn count(&self, kind: OpKind) -> usize {
        self.log().iter().filter(|&&k| k == kind).count()
    }

    fn record(&self, kind: OpKind) {
        self.log.lock().unwrap_or_else(|e| e.into_inner()).push(kind);
    }
}

impl<B: Backend> Backend for Instrumented<B> {
    fn label(&self) -> &str {
        self.inner.label()
    }

    fn bulk_import(&self, g: &GraphDataset) -> Result<(), BackendError> {
        self.record(OpKind::BulkImport);
        self.inner.bulk_import(g)
    }

    fn insert_node(&self, id: NodeId) -> Result<(), BackendError> {
        self.record(OpKind::InsertNode);
        self.inner.insert_node(id)
    }

    fn insert_edge(&self, e: WeightedEdge) -> Result<(), BackendError> {
        self.record(OpKind::InsertEdge);
        self.inner.insert_edge(e)
    }

    fn shortest_path(&self, start: NodeId, goal: NodeId) -> Result<Option<Path>, BackendError> {
        self.record(OpKind::ShortestPath);
        self.inner.shortest_path(start, goal)
    }

    fn update_edge_weight(
        &self,
        from: NodeId,
        to: NodeId,
        weight: Weight,
    ) -> Result<(), BackendError> {
        self.record(OpKind::UpdateEdgeWeight);
        self.inner.update_edge_weight(from, to, weight)
    }

    fn delete_edge(&self, from: NodeId, to: NodeId) -> Result<(), BackendError> {
        self.record(OpKind::DeleteEdge);
        self.inner.delete_edge(from, to)
    }

    fn reset(&self) -> Result<(), BackendError> {
        self.record(OpKind::Reset);
        self.inner.reset()
    }

    fn clear(&self) -> Result<(), BackendError> {
        self.record(OpKind::Clear);
        self.inner.clear()
    }

    fn ram_probe(&self) -> Option<u64> {
        self.inner.ram_probe()
    }
}
