use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::measure::{measure, partition, round_robin, run_lanes, Measurement};
use super::stats::{summarize, Summary};
use super::{CacheState, QueryType, RunConfig, WorkloadError, WorkloadKind};
use crate::backend::{Backend, BackendHandle};
use crate::dataset::{GraphDataset, NodeId, WeightedEdge};
use crate::mazegen::{
    default_target_distance, generate_maze, maze_to_graph, sample_endpoints, Endpoints, GridMaze,
};

/// Measured quantity of a run. Single-item import reports nodes and edges
/// separately.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Import,
    ImportNodes,
    ImportEdges,
    PathSearch,
    UpdateEdges,
}

impl Phase {
    pub fn as_str(self) -> &'static str {
        match self {
            Phase::Import => "import",
            Phase::ImportNodes => "import_nodes",
            Phase::ImportEdges => "import_edges",
            Phase::PathSearch => "path_search",
            Phase::UpdateEdges => "update",
        }
    }

    pub fn parse(s: &str) -> Option<Phase> {
        [
            Phase::Import,
            Phase::ImportNodes,
            Phase::ImportEdges,
            Phase::PathSearch,
            Phase::UpdateEdges,
        ]
        .into_iter()
        .find(|p| p.as_str() == s)
    }

    fn for_config(config: &RunConfig) -> Vec<Phase> {
        match (config.workload, config.query_type) {
            (WorkloadKind::Import, QueryType::Bulk) => vec![Phase::Import],
            (WorkloadKind::Import, QueryType::Single) => vec![Phase::ImportNodes, Phase::ImportEdges],
            (WorkloadKind::PathSearch, _) => vec![Phase::PathSearch],
            (WorkloadKind::UpdateEdges, _) => vec![Phase::UpdateEdges],
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug)]
pub struct PhaseResult {
    pub phase: Phase,
    pub measurements: Vec<Measurement>,
    pub summary: Option<Summary>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RouteStat {
    pub cost: u64,
    pub hops: usize,
}

/// What one repetition ran on.
#[derive(Clone, Debug)]
pub struct Repetition {
    pub index: usize,
    pub seed: u64,
    pub fingerprint: u64,
    pub endpoints: Vec<Endpoints>,
    /// Measured path-search results, `None` where no path exists.
    pub routes: Vec<Option<RouteStat>>,
}

#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub config: RunConfig,
    pub phases: Vec<PhaseResult>,
    pub repetitions: Vec<Repetition>,
    /// Set when a backend error aborted the run; completed repetitions are kept.
    pub error: Option<String>,
}

impl RunOutcome {
    pub fn summary(&self, phase: Phase) -> Option<&Summary> {
        self.phases
            .iter()
            .find(|p| p.phase == phase)
            .and_then(|p| p.summary.as_ref())
    }

    pub fn is_complete(&self) -> bool {
        self.error.is_none()
    }
}

/// Brings the backend into `state` after the dataset has been loaded.
pub fn prepare_cache(
    backend: &dyn Backend,
    state: CacheState,
    warmups: &[Endpoints],
) -> Result<(), WorkloadError> {
    let needed = state.warmup_searches();
    if warmups.len() < needed {
        return Err(WorkloadError::InvalidConfig(format!(
            "{state} cache needs {needed} warm-up endpoint pairs, got {}",
            warmups.len()
        )));
    }
    if state.resets_after_load() > 0 {
        backend.reset()?;
    }
    for ep in &warmups[..needed] {
        backend.shortest_path(ep.start, ep.goal)?;
    }
    Ok(())
}

/// Runs `config.repetitions` repetitions, each on a fresh dataset seeded with
/// `config.seed + index`, and aggregates per phase.
pub fn run_test(config: &RunConfig, backend: &BackendHandle) -> Result<RunOutcome, WorkloadError> {
    config.validate()?;
    let phases = Phase::for_config(config);
    let mut measurements: Vec<Vec<Measurement>> = vec![Vec::new(); phases.len()];
    let mut repetitions = Vec::with_capacity(config.repetitions);
    let mut error = None;

    for rep in 0..config.repetitions {
        match run_repetition(config, backend, rep) {
            Ok((r, ms)) => {
                for (acc, m) in measurements.iter_mut().zip(ms) {
                    acc.push(m);
                }
                repetitions.push(r);
            }
            Err(WorkloadError::Backend(e)) => {
                log::error!("repetition {rep} aborted: {e}");
                error = Some(format!("repetition {rep}: {e}"));
                break;
            }
            Err(e) => return Err(e),
        }
    }

    let phases = phases
        .into_iter()
        .zip(measurements)
        .map(|(phase, ms)| PhaseResult {
            phase,
            summary: summarize(&ms).ok(),
            measurements: ms,
        })
        .collect();
    Ok(RunOutcome {
        config: config.clone(),
        phases,
        repetitions,
        error,
    })
}

/// Dataset, endpoint pairs and update targets of one repetition, derived
/// from its seed alone.
pub struct RepetitionData {
    pub seed: u64,
    pub maze: GridMaze,
    pub graph: GraphDataset,
    pub warmups: Vec<Endpoints>,
    pub queries: Vec<Endpoints>,
    pub updates: Vec<WeightedEdge>,
}

pub fn repetition_data(config: &RunConfig, rep: usize) -> Result<RepetitionData, WorkloadError> {
    let seed = config.seed.wrapping_add(rep as u64);
    let maze = generate_maze(&config.grid, &config.cost_distribution, seed);
    let graph = maze_to_graph(&maze);
    // Measured queries use stream 1 and warm-ups stream 2, so the measured
    // workload is the same for every cache state.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    let mut warm_rng = ChaCha8Rng::seed_from_u64(seed);
    warm_rng.set_stream(2);

    let mut warmups = Vec::new();
    let mut queries = Vec::new();
    let mut updates = Vec::new();
    match config.workload {
        WorkloadKind::Import => {}
        WorkloadKind::PathSearch | WorkloadKind::UpdateEdges => {
            let target = config
                .euclid
                .unwrap_or_else(|| default_target_distance(&config.grid));
            for _ in 0..config.cache_state.warmup_searches() {
                warmups.push(distinct_endpoints(&maze, target, &mut warm_rng, &warmups)?);
            }
            if config.workload == WorkloadKind::PathSearch {
                for _ in 0..config.queries {
                    queries.push(sample_endpoints(&maze, target, rng.random())?);
                }
            } else {
                if graph.edges.is_empty() {
                    return Err(WorkloadError::InvalidConfig(
                        "update workload needs a graph with edges".into(),
                    ));
                }
                let sampler = config.cost_distribution.sampler();
                for _ in 0..config.queries {
                    let e = graph.edges[rng.random_range(0..graph.edges.len())];
                    updates.push(WeightedEdge {
                        weight: u64::from(sampler.sample(&mut rng)),
                        ..e
                    });
                }
            }
        }
    }
    Ok(RepetitionData {
        seed,
        maze,
        graph,
        warmups,
        queries,
        updates,
    })
}

fn distinct_endpoints(
    maze: &GridMaze,
    target: f64,
    rng: &mut ChaCha8Rng,
    taken: &[Endpoints],
) -> Result<Endpoints, WorkloadError> {
    let mut ep = sample_endpoints(maze, target, rng.random())?;
    for _ in 0..16 {
        if !taken.iter().any(|t| (t.start, t.goal) == (ep.start, ep.goal)) {
            break;
        }
        ep = sample_endpoints(maze, target, rng.random())?;
    }
    Ok(ep)
}

fn run_repetition(
    config: &RunConfig,
    backend: &BackendHandle,
    rep: usize,
) -> Result<(Repetition, Vec<Measurement>), WorkloadError> {
    let data = repetition_data(config, rep)?;
    let b: &dyn Backend = &**backend;
    b.clear()?;

    let mut routes = Vec::new();
    let ms = match config.workload {
        WorkloadKind::Import => {
            b.reset()?;
            import(config, backend, &data.graph, rep)?
        }
        WorkloadKind::PathSearch => {
            b.bulk_import(&data.graph)?;
            prepare_cache(b, config.cache_state, &data.warmups)?;
            let lanes = lanes_for(&data.queries, config);
            let timed = run_lanes(&lanes, backend, |ep: &Endpoints| b.shortest_path(ep.start, ep.goal))?;
            let (m, lanes_out) = timed.into_measurement(data.queries.len(), rep);
            routes = reorder(lanes_out, data.queries.len())
                .iter()
                .map(|p| {
                    p.as_ref().map(|p| RouteStat {
                        cost: p.total_cost,
                        hops: p.hops(),
                    })
                })
                .collect();
            vec![m]
        }
        WorkloadKind::UpdateEdges => {
            b.bulk_import(&data.graph)?;
            prepare_cache(b, config.cache_state, &data.warmups)?;
            let lanes = lanes_for(&data.updates, config);
            let timed = run_lanes(&lanes, backend, |e: &WeightedEdge| {
                b.update_edge_weight(e.from, e.to, e.weight)
            })?;
            vec![timed.into_measurement(data.updates.len(), rep).0]
        }
    };

    let mut endpoints = data.queries;
    if endpoints.is_empty() {
        endpoints = data.warmups;
    }
    Ok((
        Repetition {
            index: rep,
            seed: data.seed,
            fingerprint: data.graph.fingerprint(),
            endpoints,
            routes,
        },
        ms,
    ))
}

fn lanes_for<Q: Clone>(items: &[Q], config: &RunConfig) -> Vec<Vec<Q>> {
    round_robin(items, config.lanes())
}

/// Inverse of `round_robin` for result lanes.
fn reorder<R>(lanes: Vec<Vec<R>>, total: usize) -> Vec<R> {
    let n = lanes.len().max(1);
    let mut iters: Vec<_> = lanes.into_iter().map(Vec::into_iter).collect();
    (0..total)
        .filter_map(|i| iters.get_mut(i % n).and_then(Iterator::next))
        .collect()
}

fn import(
    config: &RunConfig,
    backend: &BackendHandle,
    graph: &GraphDataset,
    rep: usize,
) -> Result<Vec<Measurement>, WorkloadError> {
    let b: &dyn Backend = &**backend;
    let lanes = config.lanes();
    match config.query_type {
        QueryType::Bulk if !config.concurrency => {
            let (m, res) = measure(backend, || b.bulk_import(graph)).into_measurement(1, rep);
            res?;
            Ok(vec![m])
        }
        QueryType::Bulk => {
            // Portions are built before the window opens.
            let node_parts: Vec<Vec<GraphDataset>> = partition(&graph.nodes, lanes)
                .into_iter()
                .map(|nodes| vec![GraphDataset { nodes, edges: vec![] }])
                .collect();
            let edge_parts: Vec<Vec<GraphDataset>> = partition(&graph.edges, lanes)
                .into_iter()
                .map(|edges| vec![GraphDataset { nodes: vec![], edges }])
                .collect();
            let bulk = |g: &GraphDataset| b.bulk_import(g);
            let nodes = run_lanes(&node_parts, backend, bulk)?;
            let edges = run_lanes(&edge_parts, backend, bulk)?;
            Ok(vec![Measurement {
                wall_time: nodes.wall_time + edges.wall_time,
                peak_ram: max_opt(nodes.peak_ram, edges.peak_ram),
                query_count: 2 * lanes,
                repetition_index: rep,
            }])
        }
        QueryType::Single => {
            let node_lanes: Vec<Vec<NodeId>> = partition(&graph.nodes, lanes);
            let edge_lanes: Vec<Vec<WeightedEdge>> = partition(&graph.edges, lanes);
            let nodes = run_lanes(&node_lanes, backend, |&id| b.insert_node(id))?;
            let edges = run_lanes(&edge_lanes, backend, |&e| b.insert_edge(e))?;
            Ok(vec![
                nodes.into_measurement(graph.nodes.len(), rep).0,
                edges.into_measurement(graph.edges.len(), rep).0,
            ])
        }
    }
}

fn max_opt(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}
