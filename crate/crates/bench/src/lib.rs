//! Shared fixtures for the criterion benches.

use grb_core::mazegen::{
    default_target_distance, generate_maze, maze_to_graph, sample_endpoints, Endpoints,
};
use grb_core::{CostDistribution, Dimensionality, GraphDataset, GridSpec, ReferenceStore};

/// Square maze graph with Beta(0.5, 0.5) costs and `pairs` endpoint pairs at
/// the default distance.
pub fn maze_fixture(dim: Dimensionality, side: usize, pairs: usize) -> (GraphDataset, Vec<Endpoints>) {
    let spec = GridSpec::square(dim, side).expect("valid side");
    let maze = generate_maze(&spec, &CostDistribution::default_beta(), 1);
    let target = default_target_distance(&spec);
    let eps = (0..pairs as u64)
        .map(|s| sample_endpoints(&maze, target, s).expect("feasible target"))
        .collect();
    (maze_to_graph(&maze), eps)
}

pub fn loaded_store(g: &GraphDataset) -> ReferenceStore {
    let s = ReferenceStore::new();
    s.bulk_import(g).expect("maze graphs are valid");
    s
}
