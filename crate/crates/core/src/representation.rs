//! DFS interval index: answers comparison queries in O(1) from recovered edges.

use thiserror::Error;

use crate::oracle::QueryOutcome;
use crate::poset::{EdgeSet, ElementId, TreePoset};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepresentationError {
    #[error("edges do not form a tree: {0}")]
    NotATree(String),
    #[error("element {0} out of range")]
    IndexOutOfRange(ElementId),
}

/// Start/end DFS timestamps. Timestamps are 1-based and together cover
/// `1..=2n` exactly once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderIndex {
    start: Vec<u32>,
    end: Vec<u32>,
}

impl OrderIndex {
    /// Builds the index from `n − 1` edges of a single-root tree.
    ///
    /// Children are visited in ascending id order so the timestamps are
    /// reproducible.
    pub fn construct(n: usize, edges: &EdgeSet) -> Result<Self, RepresentationError> {
        if n == 0 {
            return Err(RepresentationError::NotATree("no elements".into()));
        }
        if edges.len() != n - 1 {
            return Err(RepresentationError::NotATree(format!(
                "expected {} edges, got {}",
                n - 1,
                edges.len()
            )));
        }
        let mut has_parent = vec![false; n];
        let mut children: Vec<Vec<u32>> = vec![Vec::new(); n];
        for e in edges {
            for v in [e.parent, e.child] {
                if v.index() >= n {
                    return Err(RepresentationError::IndexOutOfRange(v));
                }
            }
            // EdgeSet guarantees each child appears once
            has_parent[e.child.index()] = true;
            children[e.parent.index()].push(e.child.raw());
        }
        for list in &mut children {
            list.sort_unstable();
        }
        let roots: Vec<usize> = (0..n).filter(|&v| !has_parent[v]).collect();
        if roots.len() != 1 {
            return Err(RepresentationError::NotATree(format!(
                "expected one root, found {}",
                roots.len()
            )));
        }
        let index = Self::dfs(n, roots[0], |v| &children[v]);
        if index.start.contains(&0) {
            return Err(RepresentationError::NotATree(
                "edges contain a cycle unreachable from the root".into(),
            ));
        }
        Ok(index)
    }

    /// Index over a validated ground-truth tree.
    pub fn from_tree(tree: &TreePoset) -> Self {
        let index = Self::dfs(tree.len(), tree.root().index(), |v| {
            tree.children(ElementId::from(v))
        });
        debug_assert!(!index.start.contains(&0));
        index
    }

    // Iterative DFS; a chain of a million elements must not blow the stack.
    fn dfs<'c, C, F>(n: usize, root: usize, children_of: F) -> Self
    where
        C: ChildId + 'c,
        F: Fn(usize) -> &'c [C],
    {
        let mut start = vec![0u32; n];
        let mut end = vec![0u32; n];
        let mut clock: u32 = 1;
        // (element, next child position)
        let mut stack: Vec<(usize, usize)> = Vec::with_capacity(64);
        start[root] = clock;
        clock += 1;
        stack.push((root, 0));
        while let Some(top) = stack.last_mut() {
            let (v, pos) = *top;
            let kids = children_of(v);
            if pos < kids.len() {
                top.1 += 1;
                let c = kids[pos].to_index();
                if start[c] == 0 {
                    start[c] = clock;
                    clock += 1;
                    stack.push((c, 0));
                }
            } else {
                end[v] = clock;
                clock += 1;
                stack.pop();
            }
        }
        OrderIndex { start, end }
    }

    pub fn len(&self) -> usize {
        self.start.len()
    }

    pub fn is_empty(&self) -> bool {
        self.start.is_empty()
    }

    pub fn start(&self) -> &[u32] {
        &self.start
    }

    pub fn end(&self) -> &[u32] {
        &self.end
    }

    /// Whether `u ≻ v`, without range checks.
    #[inline]
    pub fn dominates(&self, u: ElementId, v: ElementId) -> bool {
        let (u, v) = (u.index(), v.index());
        self.start[u] < self.start[v] && self.end[v] < self.end[u]
    }

    /// Compares two elements by interval nesting. An element compared with
    /// itself is reported as incomparable since `≻` is irreflexive.
    pub fn comparison_query(
        &self,
        u: ElementId,
        v: ElementId,
    ) -> Result<QueryOutcome, RepresentationError> {
        for x in [u, v] {
            if x.index() >= self.len() {
                return Err(RepresentationError::IndexOutOfRange(x));
            }
        }
        Ok(self.compare_unchecked(u, v))
    }

    #[inline]
    pub(crate) fn compare_unchecked(&self, u: ElementId, v: ElementId) -> QueryOutcome {
        if self.dominates(u, v) {
            QueryOutcome::Dominates
        } else if self.dominates(v, u) {
            QueryOutcome::DominatedBy
        } else {
            QueryOutcome::Incomparable
        }
    }
}

trait ChildId {
    fn to_index(&self) -> usize;
}

impl ChildId for u32 {
    fn to_index(&self) -> usize {
        *self as usize
    }
}

impl ChildId for ElementId {
    fn to_index(&self) -> usize {
        self.index()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::Edge;

    fn edges(pairs: &[(usize, usize)]) -> EdgeSet {
        EdgeSet::from_edges(
            pairs
                .iter()
                .map(|&(p, c)| Edge::new(p.into(), c.into()))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn chain_timestamps() {
        let idx = OrderIndex::construct(3, &edges(&[(0, 1), (1, 2)])).unwrap();
        assert_eq!(idx.start(), &[1, 2, 3]);
        assert_eq!(idx.end(), &[6, 5, 4]);
        let q = |u: usize, v: usize| idx.comparison_query(u.into(), v.into()).unwrap();
        assert_eq!(q(0, 2), QueryOutcome::Dominates);
        assert_eq!(q(2, 0), QueryOutcome::DominatedBy);
        assert_eq!(q(1, 1), QueryOutcome::Incomparable);
    }

    #[test]
    fn single_element() {
        let idx = OrderIndex::construct(1, &EdgeSet::new()).unwrap();
        assert_eq!((idx.start(), idx.end()), (&[1u32][..], &[2u32][..]));
    }

    #[test]
    fn star_timestamps() {
        let idx = OrderIndex::construct(3, &edges(&[(0, 1), (0, 2)])).unwrap();
        assert_eq!(idx.start(), &[1, 2, 4]);
        assert_eq!(idx.end(), &[6, 3, 5]);
        assert_eq!(
            idx.comparison_query(1usize.into(), 2usize.into()).unwrap(),
            QueryOutcome::Incomparable
        );
    }

    #[test]
    fn rejects_non_trees() {
        // wrong count
        assert!(OrderIndex::construct(3, &edges(&[(0, 1)])).is_err());
        // root 0 plus a detached 2-cycle
        assert!(matches!(
            OrderIndex::construct(3, &edges(&[(1, 2), (2, 1)])),
            Err(RepresentationError::NotATree(_))
        ));
        assert!(matches!(
            OrderIndex::construct(2, &edges(&[(0, 5)])),
            Err(RepresentationError::IndexOutOfRange(_))
        ));
        let idx = OrderIndex::construct(1, &EdgeSet::new()).unwrap();
        assert!(idx.comparison_query(0usize.into(), 1usize.into()).is_err());
    }

    #[test]
    fn deep_chain_does_not_overflow() {
        let n = 1_000_000;
        let parents: Vec<Option<usize>> = (0..n)
            .map(|i| if i == 0 { None } else { Some(i - 1) })
            .collect();
        let tree = TreePoset::from_parents(&parents).unwrap();
        let idx = OrderIndex::construct(n, &tree.ground_truth_edges()).unwrap();
        assert_eq!(idx.start()[n - 1], n as u32);
        assert_eq!(idx.end()[0], 2 * n as u32);
        assert_eq!(OrderIndex::from_tree(&tree), idx);
    }
}
