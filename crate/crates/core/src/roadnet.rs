//! Road-network ingest from a plain edge-list file.
//!
//! Each road element becomes a node; each `(element, successor)` pair becomes a
//! directed edge weighted by the cost of the source element. The cost is a
//! convex combination of travel time, distance and fuel, each min-max
//! normalized over the file, scaled to `[0, 255]` and rounded.
//!
//! File format (UTF-8 CSV):
//!
//! ```text
//! id,successors,travel_time,distance,fuel
//! a,b;c,12.5,140,0.02
//! b,,3.0,35,0.004
//! ```

use std::collections::{HashMap, HashSet};
use std::io::{Read, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{GraphDataset, NodeId, WeightedEdge};

pub const HEADER: [&str; 5] = ["id", "successors", "travel_time", "distance", "fuel"];

#[derive(Debug, Error)]
pub enum RoadnetError {
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("expected header `{expected}`, found `{0}`", expected = HEADER.join(","))]
    Header(String),
    #[error("duplicate element id `{0}`")]
    DuplicateElement(String),
    #[error("element `{id}` lists successor `{successor}` twice")]
    DuplicateSuccessor { id: String, successor: String },
    #[error("unresolvable successor ids: {}", .0.join(", "))]
    UnresolvedSuccessors(Vec<String>),
    #[error("element `{id}` has negative or non-finite {field}")]
    InvalidComponent { id: String, field: &'static str },
    #[error("cost weights must be >= 0 and sum to 1 (got {0}, {1}, {2})")]
    InvalidWeights(f64, f64, f64),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoadElement {
    pub id: String,
    pub successors: Vec<String>,
    /// Seconds.
    pub travel_time: f64,
    /// Meters.
    pub distance: f64,
    pub fuel: f64,
}

/// Convex weights of the travel-time, distance and fuel components.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostWeights {
    time: f64,
    distance: f64,
    fuel: f64,
}

impl CostWeights {
    pub fn new(time: f64, distance: f64, fuel: f64) -> Result<Self, RoadnetError> {
        let ok = [time, distance, fuel].iter().all(|w| w.is_finite() && *w >= 0.0);
        if !ok || (time + distance + fuel - 1.0).abs() > 1e-9 {
            return Err(RoadnetError::InvalidWeights(time, distance, fuel));
        }
        Ok(CostWeights {
            time,
            distance,
            fuel,
        })
    }

    pub fn time_only() -> Self {
        CostWeights {
            time: 1.0,
            distance: 0.0,
            fuel: 0.0,
        }
    }
}

impl Default for CostWeights {
    fn default() -> Self {
        let third = 1.0 / 3.0;
        CostWeights {
            time: third,
            distance: third,
            fuel: third,
        }
    }
}

/// Ingested graph plus the element id of every node (`ids[node]`).
#[derive(Clone, Debug)]
pub struct RoadNetwork {
    pub dataset: GraphDataset,
    pub ids: Vec<String>,
}

#[derive(Deserialize, Serialize)]
struct Row {
    id: String,
    successors: String,
    travel_time: f64,
    distance: f64,
    fuel: f64,
}

pub fn read_elements<R: Read>(r: R) -> Result<Vec<RoadElement>, RoadnetError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(r);
    let header = rdr.headers()?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(RoadnetError::Header(header.iter().collect::<Vec<_>>().join(",")));
    }
    rdr.deserialize()
        .map(|row| {
            let row: Row = row?;
            Ok(RoadElement {
                id: row.id,
                successors: row
                    .successors
                    .split(';')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(String::from)
                    .collect(),
                travel_time: row.travel_time,
                distance: row.distance,
                fuel: row.fuel,
            })
        })
        .collect()
}

pub fn write_elements<W: Write>(elements: &[RoadElement], w: W) -> Result<(), RoadnetError> {
    let mut wtr = csv::Writer::from_writer(w);
    for e in elements {
        wtr.serialize(Row {
            id: e.id.clone(),
            successors: e.successors.join(";"),
            travel_time: e.travel_time,
            distance: e.distance,
            fuel: e.fuel,
        })?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn ingest_roadnet<R: Read>(r: R, weights: CostWeights) -> Result<RoadNetwork, RoadnetError> {
    ingest_elements(&read_elements(r)?, weights)
}

/// Min-max normalizer; a constant column maps to 0.
fn normalizer(values: impl Iterator<Item = f64> + Clone) -> impl Fn(f64) -> f64 {
    let lo = values.clone().fold(f64::INFINITY, f64::min);
    let hi = values.fold(f64::NEG_INFINITY, f64::max);
    let span = hi - lo;
    move |v| if span > 0.0 { (v - lo) / span } else { 0.0 }
}

pub fn ingest_elements(
    elements: &[RoadElement],
    weights: CostWeights,
) -> Result<RoadNetwork, RoadnetError> {
    let mut index: HashMap<&str, u64> = HashMap::with_capacity(elements.len());
    for (i, e) in elements.iter().enumerate() {
        for (field, v) in [
            ("travel_time", e.travel_time),
            ("distance", e.distance),
            ("fuel", e.fuel),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(RoadnetError::InvalidComponent {
                    id: e.id.clone(),
                    field,
                });
            }
        }
        if index.insert(&e.id, i as u64).is_some() {
            return Err(RoadnetError::DuplicateElement(e.id.clone()));
        }
    }

    let mut unresolved: Vec<String> = Vec::new();
    for e in elements {
        let mut seen = HashSet::new();
        for s in &e.successors {
            if !seen.insert(s.as_str()) {
                return Err(RoadnetError::DuplicateSuccessor {
                    id: e.id.clone(),
                    successor: s.clone(),
                });
            }
            if !index.contains_key(s.as_str()) && !unresolved.contains(s) {
                unresolved.push(s.clone());
            }
        }
    }
    if !unresolved.is_empty() {
        return Err(RoadnetError::UnresolvedSuccessors(unresolved));
    }

    let t = normalizer(elements.iter().map(|e| e.travel_time));
    let d = normalizer(elements.iter().map(|e| e.distance));
    let f = normalizer(elements.iter().map(|e| e.fuel));
    let mut edges = Vec::with_capacity(elements.iter().map(|e| e.successors.len()).sum());
    for (i, e) in elements.iter().enumerate() {
        let cost = weights.time * t(e.travel_time)
            + weights.distance * d(e.distance)
            + weights.fuel * f(e.fuel);
        let weight = (255.0 * cost).round().clamp(0.0, 255.0) as u64;
        for s in &e.successors {
            edges.push(WeightedEdge::new(i as u64, index[s.as_str()], weight));
        }
    }
    Ok(RoadNetwork {
        dataset: GraphDataset::new((0..elements.len() as u64).map(NodeId).collect(), edges),
        ids: elements.iter().map(|e| e.id.clone()).collect(),
    })
}

/// Random road-like network: every element has one successor, and the
/// remaining `pairs - elements` successor links are spread at random.
pub fn synthesize(elements: usize, pairs: usize, seed: u64) -> Vec<RoadElement> {
    assert!(elements > 1 && pairs >= elements && pairs <= elements * (elements - 1));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let name = |i: usize| format!("r{i}");
    let mut succ: Vec<Vec<usize>> = (0..elements).map(|i| vec![(i + 1) % elements]).collect();
    let mut extra = pairs - elements;
    while extra > 0 {
        let a = rng.random_range(0..elements);
        let b = rng.random_range(0..elements);
        if a != b && !succ[a].contains(&b) {
            succ[a].push(b);
            extra -= 1;
        }
    }
    succ.into_iter()
        .enumerate()
        .map(|(i, s)| RoadElement {
            id: name(i),
            successors: s.into_iter().map(name).collect(),
            travel_time: rng.random_range(1.0..120.0),
            distance: rng.random_range(5.0..2000.0),
            fuel: rng.random_range(0.0..0.3),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const CHAIN: &str = "id,successors,travel_time,distance,fuel\nA,B,5,10,1\nB,C,5,10,1\nC,,5,10,1\n";

    #[test]
    fn chain_with_equal_components() {
        let net = ingest_roadnet(CHAIN.as_bytes(), CostWeights::default()).unwrap();
        assert_eq!(net.dataset.node_count(), 3);
        assert_eq!(net.dataset.edge_count(), 2);
        assert_eq!(net.dataset.edges[0].weight, net.dataset.edges[1].weight);
        assert_eq!(net.ids, vec!["A", "B", "C"]);
    }

    #[test]
    fn out_degree_two() {
        let text = "id,successors,travel_time,distance,fuel\nA,B;C,1,1,1\nB,,2,2,2\nC,,3,3,3\n";
        let net = ingest_roadnet(text.as_bytes(), CostWeights::default()).unwrap();
        let out = net.dataset.edges.iter().filter(|e| e.from == NodeId(0)).count();
        assert_eq!(out, 2);
        // A has the minimum of every component.
        assert!(net.dataset.edges.iter().all(|e| e.weight == 0));
    }

    #[test]
    fn normalized_weights_span_range() {
        let text = "id,successors,travel_time,distance,fuel\nA,B,0,0,0\nB,A,10,10,10\n";
        let net = ingest_roadnet(text.as_bytes(), CostWeights::default()).unwrap();
        let w: Vec<u64> = net.dataset.edges.iter().map(|e| e.weight).collect();
        assert_eq!(w, vec![0, 255]);
        let half = CostWeights::new(0.5, 0.5, 0.0).unwrap();
        let text = "id,successors,travel_time,distance,fuel\nA,B,0,10,0\nB,A,10,0,5\n";
        let net = ingest_roadnet(text.as_bytes(), half).unwrap();
        assert!(net.dataset.edges.iter().all(|e| e.weight == 128));
    }

    #[test]
    fn errors() {
        let text = "id,successors,travel_time,distance,fuel\nA,X;B;Y,1,1,1\nB,,1,1,1\n";
        match ingest_roadnet(text.as_bytes(), CostWeights::default()) {
            Err(RoadnetError::UnresolvedSuccessors(ids)) => assert_eq!(ids, vec!["X", "Y"]),
            other => panic!("{other:?}"),
        }
        let text = "id,successors,travel_time,distance,fuel\nA,,-1,1,1\n";
        assert!(matches!(
            ingest_roadnet(text.as_bytes(), CostWeights::default()),
            Err(RoadnetError::InvalidComponent { field: "travel_time", .. })
        ));
        let text = "id,next,travel_time,distance,fuel\n";
        assert!(matches!(
            ingest_roadnet(text.as_bytes(), CostWeights::default()),
            Err(RoadnetError::Header(_))
        ));
        assert!(CostWeights::new(0.5, 0.5, 0.5).is_err());
        assert!(CostWeights::new(-0.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn time_weight_preserves_ordering() {
        let els = synthesize(200, 260, 4);
        let net = ingest_elements(&els, CostWeights::time_only()).unwrap();
        let weight_of = |i: usize| {
            net.dataset
                .edges
                .iter()
                .find(|e| e.from == NodeId(i as u64))
                .unwrap()
                .weight
        };
        for i in 0..els.len() {
            for j in 0..els.len() {
                if els[i].travel_time < els[j].travel_time {
                    assert!(weight_of(i) <= weight_of(j));
                }
            }
        }
    }

    #[test]
    fn file_roundtrip() {
        let els = synthesize(30, 45, 1);
        let mut buf = Vec::new();
        write_elements(&els, &mut buf).unwrap();
        assert!(String::from_utf8_lossy(&buf).starts_with("id,successors,travel_time,distance,fuel\n"));
        assert_eq!(read_elements(buf.as_slice()).unwrap(), els);
    }
}
