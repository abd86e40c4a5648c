//! Random grid mazes with per-cell traversal costs.
//!
//! A maze is an axis-aligned cell grid (1, 2 or 3 axes). Each cell carries a
//! cost in `[0, 255]`. Converting a maze to a graph yields one node per cell
//! (row-major id) and one directed edge per axis-adjacent pair, weighted by the
//! cost of the source cell.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution};
use thiserror::Error;

use crate::dataset::{GraphDataset, NodeId, WeightedEdge};

pub const MAX_COST: u8 = 255;
pub const DEFAULT_BETA_SHAPE: f64 = 0.5;
pub const ENDPOINT_RETRIES: usize = 10_000;

#[derive(Debug, Error, PartialEq)]
pub enum MazeError {
    #[error("grid needs at least one side length")]
    EmptySides,
    #[error("{dim} grid needs {expected} side length(s), got {found}")]
    SideCountMismatch {
        dim: Dimensionality,
        expected: usize,
        found: usize,
    },
    #[error("side lengths must be >= 1")]
    ZeroSide,
    #[error("beta shape parameters must be finite and > 0 (alpha={alpha}, beta={beta})")]
    InvalidDistribution { alpha: f64, beta: f64 },
    #[error("target distance {target} is not achievable in this grid (diagonal {diagonal:.3})")]
    InfeasibleTarget { target: f64, diagonal: f64 },
    #[error("unknown {what} `{value}`")]
    Unknown { what: &'static str, value: String },
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum DistKind {
    Uniform,
    Beta { alpha: f64, beta: f64 },
}

/// Distribution of cell costs. Beta parameters are validated on construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostDistribution(DistKind);

impl CostDistribution {
    pub fn uniform() -> Self {
        CostDistribution(DistKind::Uniform)
    }

    pub fn beta(alpha: f64, beta: f64) -> Result<Self, MazeError> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(alpha) || !ok(beta) {
            return Err(MazeError::InvalidDistribution { alpha, beta });
        }
        Ok(CostDistribution(DistKind::Beta { alpha, beta }))
    }

    /// Symmetric U-shaped Beta(0.5, 0.5).
    pub fn default_beta() -> Self {
        CostDistribution(DistKind::Beta {
            alpha: DEFAULT_BETA_SHAPE,
            beta: DEFAULT_BETA_SHAPE,
        })
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.0, DistKind::Uniform)
    }

    /// `(alpha, beta)` for Beta distributions.
    pub fn beta_params(&self) -> Option<(f64, f64)> {
        match self.0 {
            DistKind::Uniform => None,
            DistKind::Beta { alpha, beta } => Some((alpha, beta)),
        }
    }

    pub fn sampler(&self) -> CostSampler {
        match self.0 {
            DistKind::Uniform => CostSampler::Uniform,
            DistKind::Beta { alpha, beta } => {
                CostSampler::Beta(Beta::new(alpha, beta).expect("validated at construction"))
            }
        }
    }
}

impl Default for CostDistribution {
    fn default() -> Self {
        CostDistribution::default_beta()
    }
}

impl fmt::Display for CostDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            DistKind::Uniform => f.write_str("uniform"),
            DistKind::Beta { alpha, beta } => write!(f, "beta({alpha},{beta})"),
        }
    }
}

impl FromStr for CostDistribution {
    type Err = MazeError;

    /// Accepts `uniform`, `beta` (default shape) and `beta(A,B)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let unknown = || MazeError::Unknown {
            what: "distribution",
            value: s.to_string(),
        };
        match s {
            "uniform" => return Ok(CostDistribution::uniform()),
            "beta" => return Ok(CostDistribution::default_beta()),
            _ => {}
        }
        let inner = s
            .strip_prefix("beta(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(unknown)?;
        let (a, b) = inner.split_once(',').ok_or_else(unknown)?;
        let a: f64 = a.trim().parse().map_err(|_| unknown())?;
        let b: f64 = b.trim().parse().map_err(|_| unknown())?;
        CostDistribution::beta(a, b)
    }
}

/// Ready-to-draw form of a [`CostDistribution`].
#[derive(Clone, Debug)]
pub enum CostSampler {
    Uniform,
    Beta(Beta<f64>),
}

impl CostSampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u8 {
        match self {
            CostSampler::Uniform => rng.random_range(0..=MAX_COST),
            CostSampler::Beta(b) => {
                let x: f64 = b.sample(rng);
                (x * f64::from(MAX_COST)).round().clamp(0.0, f64::from(MAX_COST)) as u8
            }
        }
    }
}

/// Draws one cost. Prefer [`CostDistribution::sampler`] in loops.
pub fn sample_cost<R: Rng + ?Sized>(dist: &CostDistribution, rng: &mut R) -> u8 {
    dist.sampler().sample(rng)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dimensionality {
    /// Unidirectional chain.
    OneDStar,
    OneD,
    TwoD,
    ThreeD,
}

impl Dimensionality {
    pub const ALL: [Dimensionality; 4] = [
        Dimensionality::OneDStar,
        Dimensionality::OneD,
        Dimensionality::TwoD,
        Dimensionality::ThreeD,
    ];

    pub fn axes(self) -> usize {
        match self {
            Dimensionality::OneDStar | Dimensionality::OneD => 1,
            Dimensionality::TwoD => 2,
            Dimensionality::ThreeD => 3,
        }
    }

    /// Out-degree of a cell away from any border.
    pub fn interior_out_degree(self) -> usize {
        match self {
            Dimensionality::OneDStar => 1,
            d => 2 * d.axes(),
        }
    }

    pub fn is_directed_chain(self) -> bool {
        self == Dimensionality::OneDStar
    }
}

impl fmt::Display for Dimensionality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dimensionality::OneDStar => "1dstar",
            Dimensionality::OneD => "1d",
            Dimensionality::TwoD => "2d",
            Dimensionality::ThreeD => "3d",
        })
    }
}

impl FromStr for Dimensionality {
    type Err = MazeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1dstar" | "1d*" => Ok(Dimensionality::OneDStar),
            "1d" => Ok(Dimensionality::OneD),
            "2d" => Ok(Dimensionality::TwoD),
            "3d" => Ok(Dimensionality::ThreeD),
            _ => Err(MazeError::Unknown {
                what: "dimensionality",
                value: s.to_string(),
            }),
        }
    }
}

/// Grid shape. Cell ids are row-major: the first axis varies slowest.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    dimensionality: Dimensionality,
    sides: Vec<usize>,
}

impl GridSpec {
    pub fn new(dimensionality: Dimensionality, sides: Vec<usize>) -> Result<Self, MazeError> {
        if sides.is_empty() {
            return Err(MazeError::EmptySides);
        }
        if sides.len() != dimensionality.axes() {
            return Err(MazeError::SideCountMismatch {
                dim: dimensionality,
                expected: dimensionality.axes(),
                found: sides.len(),
            });
        }
        if sides.contains(&0) {
            return Err(MazeError::ZeroSide);
        }
        Ok(GridSpec {
            dimensionality,
            sides,
        })
    }

    /// Square/cubic grid with every side equal to `side`.
    pub fn square(dimensionality: Dimensionality, side: usize) -> Result<Self, MazeError> {
        GridSpec::new(dimensionality, vec![side; dimensionality.axes()])
    }

    /// Square grid whose side is the nearest integer root of `nodes`.
    pub fn from_node_count(dimensionality: Dimensionality, nodes: usize) -> Result<Self, MazeError> {
        let axes = dimensionality.axes() as i32;
        let side = (nodes as f64).powf(1.0 / f64::from(axes)).round() as usize;
        GridSpec::square(dimensionality, side)
    }

    /// Parses `N[,N[,N]]`; a single value is replicated across all axes.
    pub fn parse_sides(dimensionality: Dimensionality, s: &str) -> Result<Self, MazeError> {
        let sides = s
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| {
                p.trim().parse::<usize>().map_err(|_| MazeError::Unknown {
                    what: "side length",
                    value: p.to_string(),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if sides.len() == 1 {
            GridSpec::square(dimensionality, sides[0])
        } else {
            GridSpec::new(dimensionality, sides)
        }
    }

    pub fn dimensionality(&self) -> Dimensionality {
        self.dimensionality
    }

    pub fn sides(&self) -> &[usize] {
        &self.sides
    }

    pub fn cell_count(&self) -> usize {
        self.sides.iter().product()
    }

    fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.sides.len()];
        for k in (0..self.sides.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * self.sides[k + 1];
        }
        strides
    }

    pub fn coords(&self, cell: usize) -> Vec<usize> {
        let mut rest = cell;
        let mut out = vec![0; self.sides.len()];
        for (k, &side) in self.sides.iter().enumerate().rev() {
            out[k] = rest % side;
            rest /= side;
        }
        out
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        coords.iter().zip(&self.sides).fold(0, |acc, (&c, &s)| acc * s + c)
    }

    pub fn euclidean_distance(&self, a: usize, b: usize) -> f64 {
        self.coords(a)
            .iter()
            .zip(self.coords(b))
            .map(|(&x, y)| {
                let d = x as f64 - y as f64;
                d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    /// Largest Euclidean distance between two cells.
    pub fn diagonal(&self) -> f64 {
        self.sides
            .iter()
            .map(|&s| ((s - 1) * (s - 1)) as f64)
            .sum::<f64>()
            .sqrt()
    }

    /// Closed-form directed edge count of the converted graph.
    pub fn expected_edge_count(&self) -> usize {
        if self.dimensionality.is_directed_chain() {
            return self.cell_count() - 1;
        }
        let cells = self.cell_count();
        self.sides
            .iter()
            .map(|&s| 2 * (cells / s) * (s - 1))
            .sum()
    }

    pub fn shortest_side(&self) -> usize {
        *self.sides.iter().min().expect("non-empty by construction")
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sides: Vec<String> = self.sides.iter().map(|s| s.to_string()).collect();
        write!(f, "{} {}", self.dimensionality, sides.join("x"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridMaze {
    pub spec: GridSpec,
    pub costs: Vec<u8>,
    pub seed: u64,
}

impl GridMaze {
    pub fn cost(&self, cell: usize) -> u8 {
        self.costs[cell]
    }
}

pub fn generate_maze(spec: &GridSpec, dist: &CostDistribution, seed: u64) -> GridMaze {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sampler = dist.sampler();
    let costs = (0..spec.cell_count()).map(|_| sampler.sample(&mut rng)).collect();
    GridMaze {
        spec: spec.clone(),
        costs,
        seed,
    }
}

pub fn maze_to_graph(maze: &GridMaze) -> GraphDataset {
    let spec = &maze.spec;
    let cells = spec.cell_count();
    let nodes = (0..cells as u64).map(NodeId).collect();

    if spec.dimensionality().is_directed_chain() {
        let edges = (1..cells)
            .map(|v| WeightedEdge::new((v - 1) as u64, v as u64, u64::from(maze.cost(v - 1))))
            .collect();
        return GraphDataset { nodes, edges };
    }

    let strides = spec.strides();
    let mut edges = Vec::with_capacity(spec.expected_edge_count());
    let mut targets = Vec::with_capacity(2 * strides.len());
    for u in 0..cells {
        let coords = spec.coords(u);
        targets.clear();
        for (k, &stride) in strides.iter().enumerate() {
            if coords[k] > 0 {
                targets.push(u - stride);
            }
            if coords[k] + 1 < spec.sides()[k] {
                targets.push(u + stride);
            }
        }
        targets.sort_unstable();
        let w = u64::from(maze.cost(u));
        edges.extend(targets.iter().map(|&v| WeightedEdge::new(u as u64, v as u64, w)));
    }
    GraphDataset { nodes, edges }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Endpoints {
    pub start: NodeId,
    pub goal: NodeId,
    pub target_euclid: f64,
}

/// Accepted deviation from the target distance: 1% of it, at least half a cell.
pub fn distance_tolerance(target: f64) -> f64 {
    (0.01 * target).max(0.5)
}

/// Default target distance: half the shortest side.
pub fn default_target_distance(spec: &GridSpec) -> f64 {
    spec.shortest_side() as f64 / 2.0
}

/// Samples a start cell uniformly and a goal uniformly among cells whose
/// distance to the start lies in the tolerance band around `target_euclid`.
/// On a directed chain only downstream goals are eligible, so the pair is
/// always connected.
pub fn sample_endpoints(
    maze: &GridMaze,
    target_euclid: f64,
    seed: u64,
) -> Result<Endpoints, MazeError> {
    let spec = &maze.spec;
    let diagonal = spec.diagonal();
    let infeasible = MazeError::InfeasibleTarget {
        target: target_euclid,
        diagonal,
    };
    if !target_euclid.is_finite() || target_euclid < 0.0 {
        return Err(infeasible);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cells = spec.cell_count();
    if target_euclid == 0.0 {
        let start = NodeId(rng.random_range(0..cells) as u64);
        return Ok(Endpoints {
            start,
            goal: start,
            target_euclid,
        });
    }
    let tol = distance_tolerance(target_euclid);
    if target_euclid - tol > diagonal {
        return Err(infeasible);
    }

    let reach = (target_euclid + tol).ceil() as usize;
    let chain = spec.dimensionality().is_directed_chain();
    let mut candidates = Vec::new();
    for _ in 0..ENDPOINT_RETRIES {
        let start = rng.random_range(0..cells);
        let center = spec.coords(start);
        candidates.clear();
        for_each_in_box(spec, &center, reach, |cell| {
            if chain && cell <= start {
                return;
            }
            let d = spec.euclidean_distance(start, cell);
            if (d - target_euclid).abs() <= tol && cell != start {
                candidates.push(cell);
            }
        });
        if !candidates.is_empty() {
            let goal = candidates[rng.random_range(0..candidates.len())];
            return Ok(Endpoints {
                start: NodeId(start as u64),
                goal: NodeId(goal as u64),
                target_euclid,
            });
        }
    }
    Err(infeasible)
}

fn for_each_in_box(spec: &GridSpec, center: &[usize], reach: usize, mut f: impl FnMut(usize)) {
    let lo: Vec<usize> = center.iter().map(|&c| c.saturating_sub(reach)).collect();
    let hi: Vec<usize> = center
        .iter()
        .zip(spec.sides())
        .map(|(&c, &s)| (c + reach).min(s - 1))
        .collect();
    let mut cur = lo.clone();
    loop {
        f(spec.index(&cur));
        let mut k = cur.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if cur[k] < hi[k] {
                cur[k] += 1;
                break;
            }
            cur[k] = lo[k];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(dim: Dimensionality, side: usize) -> GridSpec {
        GridSpec::square(dim, side).unwrap()
    }

    #[test]
    fn rejects_bad_specs() {
        assert_eq!(
            GridSpec::new(Dimensionality::TwoD, vec![]),
            Err(MazeError::EmptySides)
        );
        assert!(matches!(
            GridSpec::new(Dimensionality::TwoD, vec![10]),
            Err(MazeError::SideCountMismatch { expected: 2, found: 1, .. })
        ));
        assert_eq!(
            GridSpec::new(Dimensionality::OneD, vec![0]),
            Err(MazeError::ZeroSide)
        );
        assert!(CostDistribution::beta(0.0, 1.0).is_err());
        assert!(CostDistribution::beta(1.0, f64::NAN).is_err());
    }

    #[test]
    fn standard_default_size() {
        let maze = generate_maze(
            &grid(Dimensionality::TwoD, 100),
            &CostDistribution::default_beta(),
            7,
        );
        assert_eq!(maze.costs.len(), 10_000);
        let g = maze_to_graph(&maze);
        assert_eq!(g.node_count(), 10_000);
        assert_eq!(g.edge_count(), 39_600);
    }

    #[test]
    fn single_cell_has_no_edges() {
        let maze = generate_maze(&grid(Dimensionality::OneD, 1), &CostDistribution::uniform(), 3);
        let g = maze_to_graph(&maze);
        assert_eq!((g.node_count(), g.edge_count()), (1, 0));
    }

    #[test]
    fn chain_of_five() {
        let maze = generate_maze(
            &grid(Dimensionality::OneDStar, 5),
            &CostDistribution::uniform(),
            1,
        );
        let g = maze_to_graph(&maze);
        assert_eq!((g.node_count(), g.edge_count()), (5, 4));
        for e in &g.edges {
            assert_eq!(e.to.0, e.from.0 + 1);
            assert_eq!(e.weight, u64::from(maze.costs[e.from.0 as usize]));
        }
    }

    #[test]
    fn cube_edge_count() {
        let maze = generate_maze(
            &grid(Dimensionality::ThreeD, 19),
            &CostDistribution::uniform(),
            1,
        );
        let g = maze_to_graph(&maze);
        assert_eq!(g.node_count(), 6_859);
        assert_eq!(g.edge_count(), 38_988);
        assert_eq!(6 * 19 * 19 * 18, 38_988);
    }

    #[test]
    fn edges_sorted_and_weighted_by_source() {
        let maze = generate_maze(&grid(Dimensionality::TwoD, 6), &CostDistribution::uniform(), 9);
        let g = maze_to_graph(&maze);
        assert!(g
            .edges
            .windows(2)
            .all(|w| (w[0].from, w[0].to) < (w[1].from, w[1].to)));
        for e in &g.edges {
            assert_eq!(e.weight, u64::from(maze.costs[e.from.0 as usize]));
            assert!((maze.spec.euclidean_distance(e.from.0 as usize, e.to.0 as usize) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn uniform_mean_over_seeds() {
        let spec = grid(Dimensionality::TwoD, 8);
        let mut sum = 0u64;
        let mut count = 0u64;
        for seed in 0..100 {
            let maze = generate_maze(&spec, &CostDistribution::uniform(), seed);
            sum += maze.costs.iter().map(|&c| u64::from(c)).sum::<u64>();
            count += maze.costs.len() as u64;
        }
        let mean = sum as f64 / count as f64;
        assert!((100.0..=155.0).contains(&mean), "mean {mean}");
        assert!((mean - 127.5).abs() < 3.0);
    }

    #[test]
    fn uniform_middle_third_matches_exact_count() {
        // 86 of 256 equally likely integers lie in [85, 170].
        let exact = (85..=170).count() as f64 / 256.0;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = CostDistribution::uniform().sampler();
        let n = 100_000;
        let hits = (0..n).filter(|_| (85..=170).contains(&s.sample(&mut rng))).count();
        let frac = hits as f64 / n as f64;
        assert!((frac - exact).abs() <= 0.01, "{frac} vs {exact}");
        assert!((frac - 0.337).abs() <= 0.01);
    }

    /// Midpoint quadrature of the Beta(1/2, 1/2) density over the rounding
    /// preimage of [85, 170].
    fn arcsine_mass(lo: f64, hi: f64) -> f64 {
        let steps = 200_000;
        let h = (hi - lo) / steps as f64;
        (0..steps)
            .map(|i| {
                let x = lo + (i as f64 + 0.5) * h;
                h / (std::f64::consts::PI * (x * (1.0 - x)).sqrt())
            })
            .sum()
    }

    #[test]
    fn beta_middle_third_matches_quadrature() {
        let expected = arcsine_mass(84.5 / 255.0, 170.5 / 255.0);
        assert!(expected < 0.25);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let s = CostDistribution::default_beta().sampler();
        let n = 100_000;
        let mut hits = 0;
        for _ in 0..n {
            let c = s.sample(&mut rng);
            if (85..=170).contains(&c) {
                hits += 1;
            }
        }
        let frac = hits as f64 / n as f64;
        assert!((frac - expected).abs() <= 0.01, "{frac} vs {expected}");
        assert!(frac < 0.25);
    }

    #[test]
    fn beta_mass_concentrates_at_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = CostDistribution::default_beta().sampler();
        let n = 20_000;
        let extremes = (0..n)
            .map(|_| s.sample(&mut rng))
            .filter(|&c| !(26..=229).contains(&c))
            .count();
        // Extreme tenths on each side carry far more than the uniform 20%.
        assert!(extremes as f64 / n as f64 > 0.35);
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = grid(Dimensionality::ThreeD, 5);
        let d = CostDistribution::beta(0.3, 0.7).unwrap();
        assert_eq!(generate_maze(&spec, &d, 99), generate_maze(&spec, &d, 99));
        assert_ne!(generate_maze(&spec, &d, 99).costs, generate_maze(&spec, &d, 100).costs);
    }

    #[test]
    fn coords_roundtrip() {
        let spec = GridSpec::new(Dimensionality::ThreeD, vec![2, 3, 4]).unwrap();
        for cell in 0..spec.cell_count() {
            assert_eq!(spec.index(&spec.coords(cell)), cell);
        }
        assert_eq!(spec.coords(5), vec![0, 1, 1]);
    }

    #[test]
    fn endpoints_at_fixed_distance() {
        let maze = generate_maze(&grid(Dimensionality::TwoD, 100), &CostDistribution::uniform(), 1);
        for seed in 0..20 {
            let ep = sample_endpoints(&maze, 50.0, seed).unwrap();
            let d = maze.spec.euclidean_distance(ep.start.0 as usize, ep.goal.0 as usize);
            assert!((49.5..=50.5).contains(&d), "distance {d}");
        }
        assert_eq!(
            sample_endpoints(&maze, 50.0, 3).unwrap(),
            sample_endpoints(&maze, 50.0, 3).unwrap()
        );
    }

    #[test]
    fn zero_distance_means_same_cell() {
        let maze = generate_maze(&grid(Dimensionality::ThreeD, 4), &CostDistribution::uniform(), 1);
        let ep = sample_endpoints(&maze, 0.0, 8).unwrap();
        assert_eq!(ep.start, ep.goal);
    }

    #[test]
    fn infeasible_target() {
        let maze = generate_maze(&grid(Dimensionality::TwoD, 3), &CostDistribution::uniform(), 1);
        assert!(matches!(
            sample_endpoints(&maze, 1000.0, 0),
            Err(MazeError::InfeasibleTarget { .. })
        ));
        assert!(sample_endpoints(&maze, -1.0, 0).is_err());
    }

    #[test]
    fn chain_goal_is_downstream() {
        let maze = generate_maze(
            &grid(Dimensionality::OneDStar, 400),
            &CostDistribution::uniform(),
            1,
        );
        for seed in 0..20 {
            let ep = sample_endpoints(&maze, 200.0, seed).unwrap();
            assert!(ep.goal > ep.start);
            assert!(((ep.goal.0 - ep.start.0) as f64 - 200.0).abs() <= 2.0);
        }
    }

    #[test]
    fn parses_names() {
        assert_eq!("1dstar".parse::<Dimensionality>().unwrap(), Dimensionality::OneDStar);
        assert_eq!("3D".parse::<Dimensionality>().unwrap(), Dimensionality::ThreeD);
        assert!("4d".parse::<Dimensionality>().is_err());
        assert_eq!(
            "beta(0.5,2)".parse::<CostDistribution>().unwrap(),
            CostDistribution::beta(0.5, 2.0).unwrap()
        );
        let d: CostDistribution = CostDistribution::beta(0.25, 0.75).unwrap();
        assert_eq!(d.to_string().parse::<CostDistribution>().unwrap(), d);
        assert_eq!(
            GridSpec::parse_sides(Dimensionality::ThreeD, "19").unwrap().cell_count(),
            6859
        );
        assert_eq!(
            GridSpec::from_node_count(Dimensionality::TwoD, 10_000).unwrap().sides(),
            &[100, 100]
        );
    }
}
