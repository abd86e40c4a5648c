//! Backend-neutral graph exchange form and its two-file text serialization.
//!
//! The nodes file is a `node_id` header followed by one decimal id per line in
//! ascending order. The edges file is a `from,to,weight` header followed by one
//! edge per line ordered by `(from, to)`. Output is byte-stable for identical
//! datasets.

use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use thiserror::Error;

pub const NODES_HEADER: &str = "node_id";
pub const EDGES_HEADER: &str = "from,to,weight";

/// Edge cost in integer cost units. Path sums are accumulated in `u64`.
pub type Weight = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeightedEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub weight: Weight,
}

impl WeightedEdge {
    pub fn new(from: impl Into<NodeId>, to: impl Into<NodeId>, weight: Weight) -> Self {
        WeightedEdge {
            from: from.into(),
            to: to.into(),
            weight,
        }
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("{file}: expected header `{expected}`, found `{found}`")]
    Header {
        file: &'static str,
        expected: &'static str,
        found: String,
    },
    #[error("{file} line {line}: {msg}")]
    Parse {
        file: &'static str,
        line: usize,
        msg: String,
    },
    #[error("{file} line {line}: negative weight {value}")]
    InvalidWeight {
        file: &'static str,
        line: usize,
        value: String,
    },
}

/// Node list plus directed weighted edge list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GraphDataset {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<WeightedEdge>,
}

impl GraphDataset {
    /// Builds a dataset in canonical order: nodes ascending, edges by `(from, to)`.
    pub fn new(mut nodes: Vec<NodeId>, mut edges: Vec<WeightedEdge>) -> Self {
        nodes.sort_unstable();
        edges.sort_unstable_by_key(|e| (e.from, e.to));
        GraphDataset { nodes, edges }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty() && self.edges.is_empty()
    }

    fn is_canonical(&self) -> bool {
        self.nodes.windows(2).all(|w| w[0] <= w[1])
            && self.edges.windows(2).all(|w| (w[0].from, w[0].to) <= (w[1].from, w[1].to))
    }

    fn canonical(&self) -> std::borrow::Cow<'_, GraphDataset> {
        if self.is_canonical() {
            std::borrow::Cow::Borrowed(self)
        } else {
            std::borrow::Cow::Owned(GraphDataset::new(self.nodes.clone(), self.edges.clone()))
        }
    }

    /// In-process content hash of the canonical form.
    pub fn fingerprint(&self) -> u64 {
        let canon = self.canonical();
        let mut h = DefaultHasher::new();
        canon.nodes.hash(&mut h);
        canon.edges.hash(&mut h);
        h.finish()
    }

    pub fn write_nodes<W: Write>(&self, w: W) -> io::Result<()> {
        let canon = self.canonical();
        let mut w = BufWriter::new(w);
        writeln!(w, "{NODES_HEADER}")?;
        for n in &canon.nodes {
            writeln!(w, "{n}")?;
        }
        w.flush()
    }

    pub fn write_edges<W: Write>(&self, w: W) -> io::Result<()> {
        let canon = self.canonical();
        let mut w = BufWriter::new(w);
        writeln!(w, "{EDGES_HEADER}")?;
        for e in &canon.edges {
            writeln!(w, "{},{},{}", e.from, e.to, e.weight)?;
        }
        w.flush()
    }

    pub fn read<N: BufRead, E: BufRead>(nodes: N, edges: E) -> Result<Self, DatasetError> {
        let nodes = read_nodes(nodes)?;
        let edges = read_edges(edges)?;
        Ok(GraphDataset::new(nodes, edges))
    }

    /// Writes `nodes.csv` and `edges.csv` into `dir`.
    pub fn save_dir(&self, dir: &Path) -> Result<(), DatasetError> {
        std::fs::create_dir_all(dir)?;
        self.write_nodes(std::fs::File::create(dir.join("nodes.csv"))?)?;
        self.write_edges(std::fs::File::create(dir.join("edges.csv"))?)?;
        Ok(())
    }

    pub fn load_dir(dir: &Path) -> Result<Self, DatasetError> {
        let nodes = io::BufReader::new(std::fs::File::open(dir.join("nodes.csv"))?);
        let edges = io::BufReader::new(std::fs::File::open(dir.join("edges.csv"))?);
        GraphDataset::read(nodes, edges)
    }
}

fn check_header<R: BufRead>(
    lines: &mut io::Lines<R>,
    file: &'static str,
    expected: &'static str,
) -> Result<(), DatasetError> {
    let found = lines.next().transpose()?.unwrap_or_default();
    if found.trim_end() != expected {
        return Err(DatasetError::Header {
            file,
            expected,
            found,
        });
    }
    Ok(())
}

fn parse_u64(field: &str, file: &'static str, line: usize) -> Result<u64, DatasetError> {
    field.trim().parse().map_err(|e| DatasetError::Parse {
        file,
        line,
        msg: format!("bad integer `{field}`: {e}"),
    })
}

fn read_nodes<R: BufRead>(r: R) -> Result<Vec<NodeId>, DatasetError> {
    let mut lines = r.lines();
    check_header(&mut lines, "nodes", NODES_HEADER)?;
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(NodeId(parse_u64(&line, "nodes", i + 2)?));
    }
    Ok(out)
}

fn read_edges<R: BufRead>(r: R) -> Result<Vec<WeightedEdge>, DatasetError> {
    let mut lines = r.lines();
    check_header(&mut lines, "edges", EDGES_HEADER)?;
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        let lineno = i + 2;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(DatasetError::Parse {
                file: "edges",
                line: lineno,
                msg: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let weight = fields[2].trim();
        if weight.starts_with('-') {
            return Err(DatasetError::InvalidWeight {
                file: "edges",
                line: lineno,
                value: weight.to_string(),
            });
        }
        out.push(WeightedEdge::new(
            parse_u64(fields[0], "edges", lineno)?,
            parse_u64(fields[1], "edges", lineno)?,
            parse_u64(weight, "edges", lineno)?,
        ));
    }
    Ok(out)
}
