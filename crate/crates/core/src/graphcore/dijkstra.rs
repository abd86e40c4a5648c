use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use super::{NodeId, Path, Weight};

const NO_PRED: u32 = u32::MAX;

/// Compressed adjacency (forward star). Dense indices follow ascending
/// `NodeId`, so comparing indices compares ids.
#[derive(Clone, Debug)]
pub(crate) struct ForwardStar {
    ids: Vec<NodeId>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<Weight>,
}

impl ForwardStar {
    pub(crate) fn build(adjacency: &BTreeMap<NodeId, BTreeMap<NodeId, Weight>>) -> Self {
        let ids: Vec<NodeId> = adjacency.keys().copied().collect();
        let edge_count = adjacency.values().map(BTreeMap::len).sum();
        let mut offsets = Vec::with_capacity(ids.len() + 1);
        let mut targets = Vec::with_capacity(edge_count);
        let mut weights = Vec::with_capacity(edge_count);
        offsets.push(0);
        for out in adjacency.values() {
            for (to, &w) in out {
                let dense = ids.binary_search(to).expect("edge targets are stored nodes");
                targets.push(dense as u32);
                weights.push(w);
            }
            offsets.push(targets.len());
        }
        ForwardStar {
            ids,
            offsets,
            targets,
            weights,
        }
    }

    pub(crate) fn dense(&self, id: NodeId) -> Option<usize> {
        self.ids.binary_search(&id).ok()
    }

    /// Overwrites the weight of an existing edge. Returns false if absent.
    pub(crate) fn set_weight(&mut self, from: NodeId, to: NodeId, weight: Weight) -> bool {
        let (Some(u), Some(v)) = (self.dense(from), self.dense(to)) else {
            return false;
        };
        let range = self.offsets[u]..self.offsets[u + 1];
        match self.targets[range.clone()].binary_search(&(v as u32)) {
            Ok(pos) => {
                self.weights[range.start + pos] = weight;
                true
            }
            Err(_) => false,
        }
    }

    /// Binary-heap Dijkstra with lazy deletion; stops when `goal` is settled.
    /// Equal tentative costs pop in ascending node order.
    pub(crate) fn shortest_path(&self, start: usize, goal: usize) -> Option<Path> {
        let n = self.ids.len();
        let mut dist = vec![u64::MAX; n];
        let mut pred = vec![NO_PRED; n];
        let mut heap = BinaryHeap::new();
        dist[start] = 0;
        heap.push(Reverse((0u64, start as u32)));

        while let Some(Reverse((d, u))) = heap.pop() {
            let u = u as usize;
            if d > dist[u] {
                continue;
            }
            if u == goal {
                break;
            }
            for e in self.offsets[u]..self.offsets[u + 1] {
                let v = self.targets[e] as usize;
                let nd = d + self.weights[e];
                if nd < dist[v] {
                    dist[v] = nd;
                    pred[v] = u as u32;
                    heap.push(Reverse((nd, v as u32)));
                }
            }
        }

        if dist[goal] == u64::MAX {
            return None;
        }
        let mut nodes = vec![self.ids[goal]];
        let mut cur = goal;
        while cur != start {
            cur = pred[cur] as usize;
            nodes.push(self.ids[cur]);
        }
        nodes.reverse();
        Some(Path {
            nodes,
            total_cost: dist[goal],
        })
    }

    pub(crate) fn approx_bytes(&self) -> usize {
        self.ids.capacity() * std::mem::size_of::<NodeId>()
            + self.offsets.capacity() * std::mem::size_of::<usize>()
            + self.targets.capacity() * std::mem::size_of::<u32>()
            + self.weights.capacity() * std::mem::size_of::<Weight>()
    }
}
