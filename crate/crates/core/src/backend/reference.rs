use std::sync::Arc;

use super::{process_rss_bytes, Backend, BackendError};
use crate::dataset::{GraphDataset, NodeId, Weight, WeightedEdge};
use crate::graphcore::{Path, ReferenceStore};

/// The built-in engine exposed through the [`Backend`] contract.
#[derive(Clone, Default)]
pub struct ReferenceBackend {
    store: Arc<ReferenceStore>,
}

impl ReferenceBackend {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn store(&self) -> &ReferenceStore {
        &self.store
    }
}

impl Backend for ReferenceBackend {
    fn label(&self) -> &str {
        "reference"
    }

    fn bulk_import(&self, g: &GraphDataset) -> Result<(), BackendError> {
        Ok(self.store.bulk_import(g)?)
    }

    fn insert_node(&self, id: NodeId) -> Result<(), BackendError> {
        Ok(self.store.insert_node(id)?)
    }

    fn insert_edge(&self, e: WeightedEdge) -> Result<(), BackendError> {
        Ok(self.store.insert_edge(e)?)
    }

    fn shortest_path(&self, start: NodeId, goal: NodeId) -> Result<Option<Path>, BackendError> {
        Ok(self.store.shortest_path(start, goal)?)
    }

    fn update_edge_weight(
        &self,
        from: NodeId,
        to: NodeId,
        weight: Weight,
    ) -> Result<(), BackendError> {
        Ok(self.store.update_edge_weight(from, to, weight)?)
    }

    fn delete_edge(&self, from: NodeId, to: NodeId) -> Result<(), BackendError> {
        Ok(self.store.delete_edge(from, to)?)
    }

    fn reset(&self) -> Result<(), BackendError> {
        self.store.reset();
        Ok(())
    }

    fn clear(&self) -> Result<(), BackendError> {
        self.store.clear();
        Ok(())
    }

    fn ram_probe(&self) -> Option<u64> {
        process_rss_bytes()
    }
}
