//! Bellman-Ford reference for shortest-path costs.
//!
//! Works directly on the edge list of a [`GraphDataset`] with full relaxation
//! rounds. Shares no code with the store's Dijkstra. Intended for small graphs.

use std::collections::HashMap;

use super::{GraphDataset, GraphError, NodeId};

/// Minimum cost from `start` to `goal`, or `Ok(None)` if unreachable.
/// Duplicate `(from, to)` pairs resolve to the last one listed.
pub fn shortest_path_cost(
    g: &GraphDataset,
    start: NodeId,
    goal: NodeId,
) -> Result<Option<u64>, GraphError> {
    let pos: HashMap<NodeId, usize> = g.nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
    let s = *pos.get(&start).ok_or(GraphError::UnknownNode(start))?;
    let t = *pos.get(&goal).ok_or(GraphError::UnknownNode(goal))?;

    let mut last: HashMap<(NodeId, NodeId), u64> = HashMap::new();
    for e in &g.edges {
        last.insert((e.from, e.to), e.weight);
    }
    let edges: Vec<(usize, usize, u64)> = last
        .into_iter()
        .filter_map(|((a, b), w)| Some((*pos.get(&a)?, *pos.get(&b)?, w)))
        .collect();

    let mut dist: Vec<Option<u64>> = vec![None; g.nodes.len()];
    dist[s] = Some(0);
    for _ in 0..g.nodes.len() {
        let mut changed = false;
        for &(a, b, w) in &edges {
            if let Some(da) = dist[a] {
                let cand = da + w;
                if dist[b].is_none_or(|db| cand < db) {
                    dist[b] = Some(cand);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Ok(dist[t])
}
