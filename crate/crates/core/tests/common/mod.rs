//! Reference implementations used as independent oracles in tests.
#![allow(dead_code)]

use std::collections::HashSet;

use proptest::prelude::*;
use proptest::sample::Index;
use treesort::oracle::{Oracle, OracleError};
use treesort::{ElementId, QueryOutcome, TreePoset};

/// Answers queries by walking parent pointers; O(depth) per query and
/// shares no code with the interval index.
#[derive(Debug, Clone)]
pub struct ParentWalkOracle {
    parents: Vec<Option<usize>>,
    pub total: u64,
    pub pairs: HashSet<(usize, usize)>,
}

impl ParentWalkOracle {
    pub fn new(parents: Vec<Option<usize>>) -> Self {
        ParentWalkOracle {
            parents,
            total: 0,
            pairs: HashSet::new(),
        }
    }

    pub fn from_tree(tree: &TreePoset) -> Self {
        Self::new(
            tree.elements()
                .map(|v| tree.parent(v).map(|p| p.index()))
                .collect(),
        )
    }

    /// `u` is a strict ancestor of `v`.
    pub fn above(&self, u: usize, v: usize) -> bool {
        let mut cur = self.parents[v];
        while let Some(p) = cur {
            if p == u {
                return true;
            }
            cur = self.parents[p];
        }
        false
    }
}

impl Oracle for ParentWalkOracle {
    fn len(&self) -> usize {
        self.parents.len()
    }

    fn query(&mut self, i: ElementId, j: ElementId) -> Result<QueryOutcome, OracleError> {
        let n = self.parents.len();
        for index in [i, j] {
            if index.index() >= n {
                return Err(OracleError::IndexOutOfRange { index, n });
            }
        }
        if i == j {
            return Err(OracleError::SelfQuery(i));
        }
        let (a, b) = (i.index(), j.index());
        self.total += 1;
        self.pairs.insert((a.min(b), a.max(b)));
        Ok(if self.above(a, b) {
            QueryOutcome::Dominates
        } else if self.above(b, a) {
            QueryOutcome::DominatedBy
        } else {
            QueryOutcome::Incomparable
        })
    }
}

/// Random recursive tree on `attach.len() + 1` nodes, relabeled by `perm`
/// so the root is not always element 0.
pub fn relabeled_parents(attach: &[Index], perm: &[usize]) -> Vec<Option<usize>> {
    let n = perm.len();
    let mut parents = vec![None; n];
    for (i, a) in attach.iter().enumerate() {
        let node = i + 1;
        parents[perm[node]] = Some(perm[a.index(node)]);
    }
    parents
}

/// Strategy for arbitrary labeled trees with `1..=max_n` elements.
pub fn arb_tree(max_n: usize) -> impl Strategy<Value = TreePoset> {
    (1..=max_n)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(any::<Index>(), n - 1),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
            )
        })
        .prop_map(|(attach, perm)| {
            TreePoset::from_parents(&relabeled_parents(&attach, &perm)).expect("valid tree")
        })
}

/// Largest antichain by trying every subset; only for tiny trees.
pub fn brute_force_width(tree: &TreePoset) -> usize {
    let n = tree.len();
    assert!(n <= 16);
    let walk = ParentWalkOracle::from_tree(tree);
    let comparable: Vec<u32> = (0..n)
        .map(|u| {
            (0..n)
                .filter(|&v| u != v && (walk.above(u, v) || walk.above(v, u)))
                .fold(0, |mask, v| mask | 1 << v)
        })
        .collect();
    (1u32..1 << n)
        .filter(|&set| (0..n).all(|u| set & (1 << u) == 0 || comparable[u] & set == 0))
        .map(|set| set.count_ones() as usize)
        .max()
        .unwrap_or(0)
}
