use std::fmt;
use std::str::FromStr;

use crate::mazegen::{CostDistribution, Dimensionality, GridSpec};

use super::WorkloadError;

macro_rules! named_enum {
    ($(#[$m:meta])* $name:ident, $what:literal { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = WorkloadError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim().to_ascii_lowercase().as_str() {
                    $($text => Ok($name::$variant),)+
                    other => Err(WorkloadError::InvalidConfig(format!(
                        concat!("unknown ", $what, " `{}`"), other
                    ))),
                }
            }
        }
    };
}

named_enum!(
    /// Cache preparation before the measured query.
    CacheState, "cache state" {
        Cold => "cold",
        Warm => "warm",
        Warmer => "warmer",
        Hot => "hot",
    }
);

named_enum!(QueryType, "query type" { Bulk => "bulk", Single => "single" });

named_enum!(WorkloadKind, "workload" {
    Import => "import",
    PathSearch => "path_search",
    UpdateEdges => "update",
});

impl CacheState {
    /// Unmeasured searches issued after the post-load reset.
    pub fn warmup_searches(self) -> usize {
        match self {
            CacheState::Cold | CacheState::Hot => 0,
            CacheState::Warm => 1,
            CacheState::Warmer => 2,
        }
    }

    pub fn resets_after_load(self) -> usize {
        match self {
            CacheState::Hot => 0,
            _ => 1,
        }
    }
}

/// One benchmark scenario. Defaults: 100x100 2D maze (10^4 nodes, 4 edges per
/// node), Beta(0.5, 0.5) costs, sequential, warm cache, bulk import, path
/// search, 10 repetitions.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub cost_distribution: CostDistribution,
    pub concurrency: bool,
    pub cache_state: CacheState,
    pub query_type: QueryType,
    pub workload: WorkloadKind,
    pub repetitions: usize,
    pub workers: usize,
    /// Path searches or edge updates in each measured window.
    pub queries: usize,
    /// Start/goal distance in cells; `None` means half the shortest side.
    pub euclid: Option<f64>,
    pub seed: u64,
}

pub const DEFAULT_NODES: usize = 10_000;
pub const DEFAULT_REPETITIONS: usize = 10;
pub const DEFAULT_WORKERS: usize = 10;

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: GridSpec::from_node_count(Dimensionality::TwoD, DEFAULT_NODES)
                .expect("static default"),
            cost_distribution: CostDistribution::default_beta(),
            concurrency: false,
            cache_state: CacheState::Warm,
            query_type: QueryType::Bulk,
            workload: WorkloadKind::PathSearch,
            repetitions: DEFAULT_REPETITIONS,
            workers: DEFAULT_WORKERS,
            queries: 1,
            euclid: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn nodes(&self) -> usize {
        self.grid.cell_count()
    }

    pub fn dimensionality(&self) -> Dimensionality {
        self.grid.dimensionality()
    }

    pub fn edges_per_node(&self) -> usize {
        self.dimensionality().interior_out_degree()
    }

    /// Lanes used for submission: `workers` when concurrent, else one.
    pub fn lanes(&self) -> usize {
        if self.concurrency {
            self.workers
        } else {
            1
        }
    }

    pub fn validate(&self) -> Result<(), WorkloadError> {
        let bad = |m: &str| Err(WorkloadError::InvalidConfig(m.to_string()));
        if self.repetitions == 0 {
            return bad("repetitions must be >= 1");
        }
        if self.workers == 0 {
            return bad("workers must be >= 1");
        }
        if self.queries == 0 {
            return bad("queries must be >= 1");
        }
        if let Some(d) = self.euclid {
            if !d.is_finite() || d < 0.0 {
                return bad("euclid must be a finite distance >= 0");
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_match_standard_values() {
        let c = RunConfig::default();
        assert_eq!(c.nodes(), 10_000);
        assert_eq!(c.edges_per_node(), 4);
        assert_eq!(c.cost_distribution, CostDistribution::beta(0.5, 0.5).unwrap());
        assert!(!c.concurrency);
        assert_eq!(c.cache_state, CacheState::Warm);
        assert_eq!(c.query_type, QueryType::Bulk);
        assert_eq!((c.repetitions, c.workers), (10, 10));
        c.validate().unwrap();
    }

    #[test]
    fn parse_names() {
        assert_eq!("warmer".parse::<CacheState>().unwrap(), CacheState::Warmer);
        assert_eq!("path_search".parse::<WorkloadKind>().unwrap(), WorkloadKind::PathSearch);
        assert!("lukewarm".parse::<CacheState>().is_err());
        for c in CacheState::ALL {
            assert_eq!(c.as_str().parse::<CacheState>().unwrap(), *c);
        }
    }

    #[test]
    fn rejects_zero_counts() {
        let c = RunConfig {
            repetitions: 0,
            ..RunConfig::default()
        };
        assert!(c.validate().is_err());
    }
}
