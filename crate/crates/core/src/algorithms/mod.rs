//! Oracle-driven tree sorting.
//!
//! Three drivers recover the edge set of a hidden tree:
//!
//! * [`get_edges`] splits around the exact centroid, found by sampling a
//!   random element, sorting its ancestors and binary searching on exact
//!   subtree sizes. `O(dn log n + n log² n)` expected.
//! * [`get_edges_optimized`] splits around a pseudo-centroid (subtree at
//!   least `n/4`, every child subtree below `n/2`). Subtree sizes are estimated
//!   from a random sample and only a sample of the ancestor chain is sorted.
//!   `O(dn log n)` expected.
//! * [`get_edges_det`] decomposes the tree into root-to-leaf chains and links
//!   each chain head to its parent. Deterministic `O(wn + n log n)`.
//!
//! Every randomized call derives its RNG from an explicit seed, so a
//! `(tree, seed)` pair reproduces a run exactly, query counts included.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::{CountingOracle, Oracle, OracleError};
use crate::poset::{EdgeSet, EdgeSetError, ElementId};

mod drivers;
mod separator;
mod subroutines;

pub use drivers::{
    chain_decomposition, get_edges, get_edges_det, get_edges_det_observed, get_edges_observed,
    get_edges_optimized, get_edges_optimized_observed, SortRun,
};
pub use separator::{
    get_centroid, get_pseudo_centroid, is_centroid, is_pseudo_centroid, Separator,
    PSEUDO_CENTROID_MIN_SIZE,
};
pub use subroutines::{find_minimal, get_root, get_subtrees_of_children, sort_chain, subtree_size};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SortError {
    #[error("operation needs a non-empty set")]
    EmptySet,
    #[error("element {0} is not in the working set")]
    ElementNotInSet(ElementId),
    #[error("elements {0} and {1} are incomparable but were expected to form a chain")]
    NotAChain(ElementId, ElementId),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("oracle answers are not consistent with a tree: {0}")]
    InconsistentOracle(&'static str),
    #[error("recovered edges are inconsistent: {0}")]
    InvalidEdges(#[from] EdgeSetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Centroid,
    Optimized,
    Deterministic,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [
        Algorithm::Centroid,
        Algorithm::Optimized,
        Algorithm::Deterministic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Centroid => "centroid",
            Algorithm::Optimized => "optimized",
            Algorithm::Deterministic => "deterministic",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                format!("unknown algorithm {s:?} (expected centroid, optimized or deterministic)")
            })
    }
}

/// Which separator definition a driver splits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeparatorKind {
    Centroid,
    PseudoCentroid,
}

/// Hooks into the divide-and-conquer recursion, for instrumentation.
pub trait SortObserver {
    /// A subproblem of `child_len` elements was carved out of one of
    /// `parent_len` elements.
    fn subproblem(&mut self, _parent_len: usize, _child_len: usize) {}

    /// `chosen` was accepted as the separator of `set`.
    fn separator(&mut self, _kind: SeparatorKind, _set: &[ElementId], _chosen: ElementId) {}
}

/// Observer that ignores everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl SortObserver for NoObserver {}

/// Counters gathered during a single sorting run.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunStats {
    /// Separators accepted (one per recursive call on more than one element).
    pub separators: u64,
    /// Sampling rounds across all separator searches.
    pub rounds: u64,
    /// Sampling rounds that did not produce an accepted separator.
    pub retries: u64,
    /// Separator searches that hit the retry budget and fell back to an exact scan.
    pub fallbacks: u64,
    /// Chains extracted by the deterministic algorithm.
    pub chains: u64,
}

impl RunStats {
    fn record(&mut self, sep: &Separator) {
        self.separators += 1;
        self.rounds += u64::from(sep.rounds);
        self.retries += u64::from(sep.retries);
        self.fallbacks += u64::from(sep.exhausted);
    }
}

/// Outcome of one algorithm run against a counting oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmReport {
    pub algorithm: Algorithm,
    pub edges: EdgeSet,
    pub total_queries: u64,
    pub distinct_queries: u64,
    /// Time spent recovering edges only.
    pub wall_time: Duration,
    pub retries: u64,
    pub seed: u64,
    pub stats: RunStats,
}

/// Sorts every element the oracle knows about and reports the query cost.
/// Counters are reset before the run.
pub fn run_algorithm(
    algorithm: Algorithm,
    oracle: &mut CountingOracle,
    seed: u64,
) -> Result<AlgorithmReport, SortError> {
    run_algorithm_observed(algorithm, oracle, seed, &mut NoObserver)
}

pub fn run_algorithm_observed(
    algorithm: Algorithm,
    oracle: &mut CountingOracle,
    seed: u64,
    observer: &mut dyn SortObserver,
) -> Result<AlgorithmReport, SortError> {
    let all: Vec<ElementId> = (0..oracle.len()).map(ElementId::from).collect();
    oracle.reset_counters();
    let started = Instant::now();
    let run = match algorithm {
        Algorithm::Centroid => get_edges_observed(&all, &mut *oracle, seed, observer)?,
        Algorithm::Optimized => get_edges_optimized_observed(&all, &mut *oracle, seed, observer)?,
        Algorithm::Deterministic => get_edges_det_observed(&all, &mut *oracle)?,
    };
    let wall_time = started.elapsed();
    let (total_queries, distinct_queries) = oracle.counters();
    Ok(AlgorithmReport {
        algorithm,
        edges: run.edges,
        total_queries,
        distinct_queries,
        wall_time,
        retries: run.stats.retries,
        seed,
        stats: run.stats,
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministically derives the seed of sub-stream `stream` from `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream ^ 0xD1B5_4A32_D192_ED03))
}

/// `⌈log₂ n⌉`, with `ceil_log2(1) == 0`.
pub(crate) fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}
