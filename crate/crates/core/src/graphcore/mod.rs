//! In-memory reference graph engine.
//!
//! [`ReferenceStore`] holds nodes and weighted directed edges and answers
//! Dijkstra queries over a lazily built forward-star index. The index plays the
//! role of the engine's cache: [`ReferenceStore::reset`] drops it, so the first
//! search afterwards rebuilds it. [`oracle`] is an independent Bellman-Ford
//! implementation used to cross-check results.

mod dijkstra;
pub mod oracle;
mod store;

use thiserror::Error;

pub use crate::dataset::{GraphDataset, NodeId, Weight, WeightedEdge};
pub use store::ReferenceStore;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("node {0} already exists")]
    DuplicateNode(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0} -> {1}")]
    UnknownEdge(NodeId, NodeId),
}

/// A route returned by a shortest-path query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    pub nodes: Vec<NodeId>,
    pub total_cost: u64,
}

impl Path {
    pub fn hops(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    /// Checks that consecutive nodes are joined by edges of `graph` and that
    /// `total_cost` is the sum of their weights.
    pub fn validate(&self, graph: &GraphDataset) -> Result<(), String> {
        if self.nodes.is_empty() {
            return Err("empty path".into());
        }
        let mut sum = 0u64;
        for pair in self.nodes.windows(2) {
            let w = graph
                .edges
                .iter()
                .find(|e| e.from == pair[0] && e.to == pair[1])
                .map(|e| e.weight)
                .ok_or_else(|| format!("no edge {} -> {}", pair[0], pair[1]))?;
            sum += w;
        }
        if sum != self.total_cost {
            return Err(format!("cost {} != edge sum {}", self.total_cost, sum));
        }
        Ok(())
    }
}
