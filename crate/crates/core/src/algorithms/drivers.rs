use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::oracle::Oracle;
use crate::poset::{Edge, EdgeSet, ElementId};

use super::separator::{locate_centroid, locate_pseudo_centroid};
use super::subroutines::{find_minimal, sort_chain};
use super::{derive_seed, NoObserver, RunStats, SeparatorKind, SortError, SortObserver};

/// Recovered edges plus the counters of the run that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct SortRun {
    pub edges: EdgeSet,
    pub stats: RunStats,
}

struct DivideAndConquer<'a, O> {
    oracle: &'a mut O,
    observer: &'a mut dyn SortObserver,
    kind: SeparatorKind,
    stats: RunStats,
    edges: Vec<Edge>,
}

impl<O: Oracle> DivideAndConquer<'_, O> {
    fn solve(&mut self, set: &[ElementId], seed: u64) -> Result<(), SortError> {
        let n = set.len();
        if n <= 1 {
            return Ok(());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, 0));
        let (sep, split) = match self.kind {
            SeparatorKind::Centroid => locate_centroid(set, self.oracle, &mut rng)?,
            SeparatorKind::PseudoCentroid => locate_pseudo_centroid(set, self.oracle, &mut rng)?,
        };
        let c = sep.element;
        self.stats.record(&sep);
        self.observer.separator(self.kind, set, c);

        if !split.rest.is_empty() {
            self.observer.subproblem(n, split.rest.len());
            self.solve(&split.rest, derive_seed(seed, 1))?;
        }
        for (i, subtree) in split.children.iter().enumerate() {
            self.observer.subproblem(n, subtree.len());
            self.solve(subtree, derive_seed(seed, i as u64 + 2))?;
            self.edges.push(Edge::new(c, subtree[0]));
        }
        if !split.ancestors.is_empty() {
            let parent = find_minimal(&split.ancestors, self.oracle)?;
            self.edges.push(Edge::new(parent, c));
        }
        Ok(())
    }
}

fn divide_and_conquer<O: Oracle>(
    kind: SeparatorKind,
    set: &[ElementId],
    oracle: &mut O,
    seed: u64,
    observer: &mut dyn SortObserver,
) -> Result<SortRun, SortError> {
    let mut driver = DivideAndConquer {
        oracle,
        observer,
        kind,
        stats: RunStats::default(),
        edges: Vec::with_capacity(set.len().saturating_sub(1)),
    };
    driver.solve(set, seed)?;
    Ok(SortRun {
        edges: EdgeSet::from_edges(driver.edges)?,
        stats: driver.stats,
    })
}

/// Edges of `set` (empty, or with one maximal element) by centroid
/// divide and conquer.
pub fn get_edges<O: Oracle>(
    set: &[ElementId],
    oracle: &mut O,
    seed: u64,
) -> Result<EdgeSet, SortError> {
    get_edges_observed(set, oracle, seed, &mut NoObserver).map(|run| run.edges)
}

pub fn get_edges_observed<O: Oracle>(
    set: &[ElementId],
    oracle: &mut O,
    seed: u64,
    observer: &mut dyn SortObserver,
) -> Result<SortRun, SortError> {
    divide_and_conquer(SeparatorKind::Centroid, set, oracle, seed, observer)
}

/// Edges of `set` by pseudo-centroid divide and conquer.
pub fn get_edges_optimized<O: Oracle>(
    set: &[ElementId],
    oracle: &mut O,
    seed: u64,
) -> Result<EdgeSet, SortError> {
    get_edges_optimized_observed(set, oracle, seed, &mut NoObserver).map(|run| run.edges)
}

pub fn get_edges_optimized_observed<O: Oracle>(
    set: &[ElementId],
    oracle: &mut O,
    seed: u64,
    observer: &mut dyn SortObserver,
) -> Result<SortRun, SortError> {
    divide_and_conquer(SeparatorKind::PseudoCentroid, set, oracle, seed, observer)
}

/// Splits `set` into disjoint chains, each sorted from the top down.
///
/// Every round takes a minimal element of what is left together with all of
/// its remaining ancestors, so there is one chain per leaf.
pub fn chain_decomposition<O: Oracle>(
    set: &[ElementId],
    oracle: &mut O,
) -> Result<Vec<Vec<ElementId>>, SortError> {
    let mut rest = set.to_vec();
    let mut chains = Vec::new();
    while !rest.is_empty() {
        let low = find_minimal(&rest, oracle)?;
        let mut chain = Vec::new();
        let mut remaining = Vec::with_capacity(rest.len());
        for &h in &rest {
            if h == low || oracle.dominates(h, low)? {
                chain.push(h);
            } else {
                remaining.push(h);
            }
        }
        chains.push(sort_chain(&chain, oracle)?);
        rest = remaining;
    }
    Ok(chains)
}

/// Deterministic edges of `set` via chain decomposition.
pub fn get_edges_det<O: Oracle>(set: &[ElementId], oracle: &mut O) -> Result<EdgeSet, SortError> {
    get_edges_det_observed(set, oracle).map(|run| run.edges)
}

pub fn get_edges_det_observed<O: Oracle>(
    set: &[ElementId],
    oracle: &mut O,
) -> Result<SortRun, SortError> {
    let chains = chain_decomposition(set, oracle)?;
    let mut edges = Vec::with_capacity(set.len().saturating_sub(1));
    for chain in &chains {
        let head = chain[0];
        // `None` is the synthetic top element: it dominates everything and
        // comparing against it is free.
        let mut lowest_above: Option<ElementId> = None;
        for &t in set {
            if t == head || !oracle.dominates(t, head)? {
                continue;
            }
            match lowest_above {
                None => lowest_above = Some(t),
                Some(cur) if oracle.dominates(cur, t)? => lowest_above = Some(t),
                Some(_) => {}
            }
        }
        if let Some(parent) = lowest_above {
            edges.push(Edge::new(parent, head));
        }
        edges.extend(chain.windows(2).map(|w| Edge::new(w[0], w[1])));
    }
    let stats = RunStats {
        chains: chains.len() as u64,
        ..RunStats::default()
    };
    Ok(SortRun {
        edges: EdgeSet::from_edges(edges)?,
        stats,
    })
}
