//! Comparison oracles.
//!
//! Algorithms only see the [`Oracle`] trait. [`CountingOracle`] answers from a
//! hidden [`TreePoset`] in O(1) through a DFS interval index and records every
//! query it is charged for.

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{ElementId, TreePoset};
use crate::representation::OrderIndex;

/// Answer to `Q(i, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QueryOutcome {
    /// `i ≻ j`
    Dominates,
    /// `j ≻ i`
    DominatedBy,
    Incomparable,
}

impl QueryOutcome {
    /// The answer to the same query with the arguments swapped.
    pub fn reversed(self) -> Self {
        match self {
            QueryOutcome::Dominates => QueryOutcome::DominatedBy,
            QueryOutcome::DominatedBy => QueryOutcome::Dominates,
            QueryOutcome::Incomparable => QueryOutcome::Incomparable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("element {0} compared with itself")]
    SelfQuery(ElementId),
    #[error("element {index} out of range for {n} elements")]
    IndexOutOfRange { index: ElementId, n: usize },
}

/// Black-box access to an unknown tree order.
pub trait Oracle {
    /// Number of elements the oracle knows about.
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn query(&mut self, i: ElementId, j: ElementId) -> Result<QueryOutcome, OracleError>;

    /// Shorthand for `query(i, j) == Dominates`.
    fn dominates(&mut self, i: ElementId, j: ElementId) -> Result<bool, OracleError> {
        Ok(self.query(i, j)? == QueryOutcome::Dominates)
    }
}

impl<O: Oracle + ?Sized> Oracle for &mut O {
    fn len(&self) -> usize {
        (**self).len()
    }

    fn query(&mut self, i: ElementId, j: ElementId) -> Result<QueryOutcome, OracleError> {
        (**self).query(i, j)
    }
}

fn check_pair(n: usize, i: ElementId, j: ElementId) -> Result<(), OracleError> {
    for index in [i, j] {
        if index.index() >= n {
            return Err(OracleError::IndexOutOfRange { index, n });
        }
    }
    if i == j {
        return Err(OracleError::SelfQuery(i));
    }
    Ok(())
}

#[inline]
fn pair_key(i: ElementId, j: ElementId) -> u64 {
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    (u64::from(lo.raw()) << 32) | u64::from(hi.raw())
}

/// Ground-truth oracle that counts total and distinct queries.
#[derive(Debug, Clone)]
pub struct CountingOracle {
    index: OrderIndex,
    virtual_root: Option<ElementId>,
    total: u64,
    pairs: FxHashSet<u64>,
}

impl CountingOracle {
    pub fn new(tree: &TreePoset) -> Self {
        CountingOracle {
            index: OrderIndex::from_tree(tree),
            virtual_root: None,
            total: 0,
            pairs: FxHashSet::default(),
        }
    }

    /// Queries touching `virtual_root` are answered without being counted.
    pub fn with_virtual_root(tree: &TreePoset, virtual_root: ElementId) -> Self {
        CountingOracle {
            virtual_root: Some(virtual_root),
            ..Self::new(tree)
        }
    }

    pub fn virtual_root(&self) -> Option<ElementId> {
        self.virtual_root
    }

    /// `(total, distinct)` query counts.
    pub fn counters(&self) -> (u64, u64) {
        (self.total, self.pairs.len() as u64)
    }

    pub fn total_queries(&self) -> u64 {
        self.total
    }

    pub fn distinct_queries(&self) -> u64 {
        self.pairs.len() as u64
    }

    pub fn reset_counters(&mut self) {
        self.total = 0;
        self.pairs.clear();
    }

    /// Whether the unordered pair `{i, j}` has been queried since the last reset.
    pub fn was_queried(&self, i: ElementId, j: ElementId) -> bool {
        self.pairs.contains(&pair_key(i, j))
    }

    /// Every unordered pair queried since the last reset, as `(low, high)`.
    pub fn distinct_pairs(&self) -> impl Iterator<Item = (ElementId, ElementId)> + '_ {
        self.pairs
            .iter()
            .map(|&k| (ElementId::new((k >> 32) as u32), ElementId::new(k as u32)))
    }
}

impl Oracle for CountingOracle {
    fn len(&self) -> usize {
        self.index.len()
    }

    #[inline]
    fn query(&mut self, i: ElementId, j: ElementId) -> Result<QueryOutcome, OracleError> {
        check_pair(self.index.len(), i, j)?;
        let answer = self.index.compare_unchecked(i, j);
        if self.virtual_root != Some(i) && self.virtual_root != Some(j) {
            self.total += 1;
            self.pairs.insert(pair_key(i, j));
        }
        Ok(answer)
    }
}

/// Memoizing wrapper: repeated questions about a pair are answered from a
/// cache and never reach the inner oracle.
#[derive(Debug)]
pub struct CachingOracle<O> {
    inner: O,
    cache: FxHashMap<u64, QueryOutcome>,
    hits: u64,
}

impl<O: Oracle> CachingOracle<O> {
    pub fn new(inner: O) -> Self {
        CachingOracle {
            inner,
            cache: FxHashMap::default(),
            hits: 0,
        }
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }
}

impl<O: Oracle> Oracle for CachingOracle<O> {
    fn len(&self) -> usize {
        self.inner.len()
    }

    fn query(&mut self, i: ElementId, j: ElementId) -> Result<QueryOutcome, OracleError> {
        check_pair(self.inner.len(), i, j)?;
        // cached answers are stored oriented from the lower id
        let key = pair_key(i, j);
        let flip = i > j;
        let stored = match self.cache.get(&key) {
            Some(&a) => {
                self.hits += 1;
                a
            }
            None => {
                let (lo, hi) = if flip { (j, i) } else { (i, j) };
                let a = self.inner.query(lo, hi)?;
                self.cache.insert(key, a);
                a
            }
        };
        Ok(if flip { stored.reversed() } else { stored })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> ElementId {
        ElementId::from(i)
    }

    fn chain3() -> TreePoset {
        TreePoset::from_signed_parents(&[-1, 0, 1]).unwrap()
    }

    #[test]
    fn answers_on_chain_and_star() {
        let mut o = CountingOracle::new(&chain3());
        assert_eq!(o.counters(), (0, 0));
        assert_eq!(o.query(e(2), e(0)), Ok(QueryOutcome::DominatedBy));
        assert_eq!(o.total_queries(), 1);
        assert_eq!(o.query(e(0), e(2)), Ok(QueryOutcome::Dominates));

        let star = TreePoset::from_signed_parents(&[-1, 0, 0, 0]).unwrap();
        let mut o = CountingOracle::new(&star);
        assert_eq!(o.query(e(1), e(2)), Ok(QueryOutcome::Incomparable));
    }

    #[test]
    fn counts_total_and_distinct() {
        let mut o = CountingOracle::new(&chain3());
        for _ in 0..3 {
            o.query(e(0), e(1)).unwrap();
        }
        assert_eq!(o.counters(), (3, 1));
        o.query(e(1), e(0)).unwrap();
        assert_eq!(o.counters(), (4, 1));
        o.reset_counters();
        o.query(e(0), e(1)).unwrap();
        o.query(e(1), e(2)).unwrap();
        assert_eq!(o.counters(), (2, 2));
        assert!(o.was_queried(e(2), e(1)));
        assert!(!o.was_queried(e(0), e(2)));
        let mut pairs: Vec<_> = o.distinct_pairs().collect();
        pairs.sort();
        assert_eq!(pairs, vec![(e(0), e(1)), (e(1), e(2))]);
    }

    #[test]
    fn rejects_self_and_out_of_range() {
        let mut o = CountingOracle::new(&chain3());
        assert_eq!(o.query(e(1), e(1)), Err(OracleError::SelfQuery(e(1))));
        assert!(matches!(
            o.query(e(0), e(3)),
            Err(OracleError::IndexOutOfRange { n: 3, .. })
        ));
        assert_eq!(o.counters(), (0, 0));
    }

    #[test]
    fn virtual_root_queries_are_free() {
        let (tree, v) = TreePoset::augment_with_virtual_root(&[None, Some(0), None]).unwrap();
        let mut o = CountingOracle::with_virtual_root(&tree, v);
        assert_eq!(o.query(v, e(1)), Ok(QueryOutcome::Dominates));
        assert_eq!(o.query(e(2), v), Ok(QueryOutcome::DominatedBy));
        assert_eq!(o.counters(), (0, 0));
        assert_eq!(o.query(e(0), e(2)), Ok(QueryOutcome::Incomparable));
        assert_eq!(o.counters(), (1, 1));
    }

    #[test]
    fn caching_wrapper_forwards_each_pair_once() {
        let mut o = CachingOracle::new(CountingOracle::new(&chain3()));
        assert_eq!(o.query(e(2), e(1)), Ok(QueryOutcome::DominatedBy));
        assert_eq!(o.query(e(1), e(2)), Ok(QueryOutcome::Dominates));
        assert_eq!(o.query(e(2), e(1)), Ok(QueryOutcome::DominatedBy));
        assert_eq!(o.hits(), 2);
        assert_eq!(o.inner().counters(), (1, 1));
    }
}
