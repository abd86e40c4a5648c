use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, RwLock, RwLockReadGuard, RwLockWriteGuard};

use super::dijkstra::ForwardStar;
use super::{GraphDataset, GraphError, NodeId, Path, Weight, WeightedEdge};

type Adjacency = BTreeMap<NodeId, BTreeMap<NodeId, Weight>>;

#[derive(Default)]
struct State {
    adjacency: Adjacency,
    edge_count: usize,
    index: Option<Arc<ForwardStar>>,
}

/// Thread-safe reference store.
///
/// Readers run against an immutable index snapshot, so a query observes the
/// graph either entirely before or entirely after any concurrent write.
#[derive(Default)]
pub struct ReferenceStore {
    state: RwLock<State>,
}

impl ReferenceStore {
    pub fn new() -> Self {
        Self::default()
    }

    fn read(&self) -> RwLockReadGuard<'_, State> {
        self.state.read().unwrap_or_else(|e| e.into_inner())
    }

    fn write(&self) -> RwLockWriteGuard<'_, State> {
        self.state.write().unwrap_or_else(|e| e.into_inner())
    }

    pub fn node_count(&self) -> usize {
        self.read().adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.read().edge_count
    }

    pub fn contains_node(&self, id: NodeId) -> bool {
        self.read().adjacency.contains_key(&id)
    }

    pub fn edge_weight(&self, from: NodeId, to: NodeId) -> Option<Weight> {
        self.read().adjacency.get(&from)?.get(&to).copied()
    }

    /// Whether the search index (the store's cache) is currently built.
    pub fn index_built(&self) -> bool {
        self.read().index.is_some()
    }

    pub fn insert_node(&self, id: NodeId) -> Result<(), GraphError> {
        let mut s = self.write();
        if s.adjacency.contains_key(&id) {
            return Err(GraphError::DuplicateNode(id));
        }
        s.adjacency.insert(id, BTreeMap::new());
        s.index = None;
        Ok(())
    }

    /// Stores an edge; an existing `(from, to)` edge gets the new weight.
    pub fn insert_edge(&self, e: WeightedEdge) -> Result<(), GraphError> {
        let mut s = self.write();
        if !s.adjacency.contains_key(&e.to) {
            return Err(GraphError::UnknownNode(e.to));
        }
        let out = s
            .adjacency
            .get_mut(&e.from)
            .ok_or(GraphError::UnknownNode(e.from))?;
        if out.insert(e.to, e.weight).is_none() {
            s.edge_count += 1;
        }
        s.index = None;
        Ok(())
    }

    /// Inserts all nodes then all edges. Validation happens up front, so a
    /// failing import leaves the store untouched.
    pub fn bulk_import(&self, g: &GraphDataset) -> Result<(), GraphError> {
        if g.is_empty() {
            return Ok(());
        }
        let mut s = self.write();
        let mut fresh = BTreeSet::new();
        for &n in &g.nodes {
            if s.adjacency.contains_key(&n) || !fresh.insert(n) {
                return Err(GraphError::DuplicateNode(n));
            }
        }
        let known = |id: &NodeId| fresh.contains(id) || s.adjacency.contains_key(id);
        for e in &g.edges {
            for end in [e.from, e.to] {
                if !known(&end) {
                    return Err(GraphError::UnknownNode(end));
                }
            }
        }
        for n in fresh {
            s.adjacency.insert(n, BTreeMap::new());
        }
        let mut added = 0;
        for e in &g.edges {
            let out = s.adjacency.get_mut(&e.from).expect("validated");
            if out.insert(e.to, e.weight).is_none() {
                added += 1;
            }
        }
        s.edge_count += added;
        s.index = None;
        Ok(())
    }

    pub fn update_edge_weight(
        &self,
        from: NodeId,
        to: NodeId,
        weight: Weight,
    ) -> Result<(), GraphError> {
        let mut s = self.write();
        let slot = s
            .adjacency
            .get_mut(&from)
            .and_then(|out| out.get_mut(&to))
            .ok_or(GraphError::UnknownEdge(from, to))?;
        *slot = weight;
        // Readers holding the old snapshot keep it; make_mut copies if shared.
        if let Some(index) = s.index.as_mut() {
            let patched = Arc::make_mut(index).set_weight(from, to, weight);
            debug_assert!(patched);
        }
        Ok(())
    }

    pub fn delete_edge(&self, from: NodeId, to: NodeId) -> Result<(), GraphError> {
        let mut s = self.write();
        s.adjacency
            .get_mut(&from)
            .and_then(|out| out.remove(&to))
            .ok_or(GraphError::UnknownEdge(from, to))?;
        s.edge_count -= 1;
        s.index = None;
        Ok(())
    }

    /// Drops the search index. Graph content is kept.
    pub fn reset(&self) {
        self.write().index = None;
    }

    /// Removes all content.
    pub fn clear(&self) {
        *self.write() = State::default();
    }

    fn index(&self) -> Arc<ForwardStar> {
        if let Some(index) = &self.read().index {
            return Arc::clone(index);
        }
        let mut s = self.write();
        if s.index.is_none() {
            s.index = Some(Arc::new(ForwardStar::build(&s.adjacency)));
        }
        Arc::clone(s.index.as_ref().expect("just built"))
    }

    /// Minimum-cost route from `start` to `goal`; `Ok(None)` when unreachable.
    pub fn shortest_path(&self, start: NodeId, goal: NodeId) -> Result<Option<Path>, GraphError> {
        let index = self.index();
        let s = index.dense(start).ok_or(GraphError::UnknownNode(start))?;
        let g = index.dense(goal).ok_or(GraphError::UnknownNode(goal))?;
        Ok(index.shortest_path(s, g))
    }

    /// Current content in canonical dataset form.
    pub fn snapshot(&self) -> GraphDataset {
        let s = self.read();
        let nodes = s.adjacency.keys().copied().collect();
        let edges = s
            .adjacency
            .iter()
            .flat_map(|(&from, out)| out.iter().map(move |(&to, &w)| WeightedEdge::new(from, to, w)))
            .collect();
        GraphDataset { nodes, edges }
    }

    /// Rough heap footprint of the index.
    pub fn index_bytes(&self) -> usize {
        self.read().index.as_ref().map_or(0, |i| i.approx_bytes())
    }
}
