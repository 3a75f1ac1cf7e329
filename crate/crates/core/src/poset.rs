//! Ground-truth tree posets and the edge sets the sorting algorithms recover.
//!
//! Elements are dense indices `0..n`. A [`TreePoset`] is an arborescence given
//! by a parent array; `u ≻ v` holds exactly when `u` is a strict ancestor of
//! `v`.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an element in `0..n`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElementId(u32);

impl ElementId {
    pub const fn new(index: u32) -> Self {
        ElementId(index)
    }

    #[inline]
    pub const fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub const fn raw(self) -> u32 {
        self.0
    }
}

impl From<usize> for ElementId {
    #[inline]
    fn from(index: usize) -> Self {
        debug_assert!(index <= u32::MAX as usize);
        ElementId(index as u32)
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Shorthand for building element lists in tests and examples.
pub fn ids<I: IntoIterator<Item = usize>>(indices: I) -> Vec<ElementId> {
    indices.into_iter().map(ElementId::from).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("a tree needs at least one element")]
    Empty,
    #[error("expected exactly one root, found {0}")]
    MultipleRoots(usize),
    #[error("parent links contain a cycle through element {0}")]
    CycleDetected(ElementId),
    #[error("element index {index} out of range for {n} elements")]
    IndexOutOfRange { index: i64, n: usize },
    #[error("input already has a single root; no virtual root is needed")]
    SingleRootNoAugmentationNeeded,
}

/// A tree partial order with a single maximal element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreePoset {
    parent: Vec<Option<ElementId>>,
    children: Vec<Vec<ElementId>>,
    depth: Vec<u32>,
    root: ElementId,
}

impl TreePoset {
    /// Validates a parent array (`None` marks the root) and derives children
    /// lists (ascending) and depths.
    pub fn from_parents(parents: &[Option<usize>]) -> Result<Self, PosetError> {
        let n = parents.len();
        if n == 0 {
            return Err(PosetError::Empty);
        }
        if n > u32::MAX as usize {
            return Err(PosetError::IndexOutOfRange { index: n as i64, n });
        }
        for &p in parents.iter().flatten() {
            if p >= n {
                return Err(PosetError::IndexOutOfRange { index: p as i64, n });
            }
        }

        let roots: Vec<usize> = (0..n).filter(|&i| parents[i].is_none()).collect();
        match roots.len() {
            // every element has a parent, so the links must loop somewhere
            0 => return Err(PosetError::CycleDetected(first_on_cycle(parents))),
            1 => {}
            k => return Err(PosetError::MultipleRoots(k)),
        }
        let root = roots[0];

        let mut children = vec![Vec::new(); n];
        for (child, parent) in parents.iter().enumerate() {
            if let Some(p) = *parent {
                children[p].push(ElementId::from(child));
            }
        }

        // BFS from the root; anything unreached sits on a cycle or hangs off one.
        let mut depth = vec![u32::MAX; n];
        depth[root] = 0;
        let mut queue = std::collections::VecDeque::from([root]);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &c in &children[u] {
                depth[c.index()] = depth[u] + 1;
                reached += 1;
                queue.push_back(c.index());
            }
        }
        if reached != n {
            let stray = (0..n).find(|&i| depth[i] == u32::MAX).unwrap();
            let start = walk_into_cycle(parents, stray);
            return Err(PosetError::CycleDetected(ElementId::from(start)));
        }

        Ok(TreePoset {
            parent: parents.iter().map(|p| p.map(ElementId::from)).collect(),
            children,
            depth,
            root: ElementId::from(root),
        })
    }

    /// Parses the file-format encoding where the root's parent is `-1`.
    pub fn from_signed_parents(parents: &[i64]) -> Result<Self, PosetError> {
        let n = parents.len();
        let mut converted = Vec::with_capacity(n);
        for &p in parents {
            converted.push(match p {
                -1 => None,
                p if p >= 0 && (p as u64) < n as u64 => Some(p as usize),
                p => return Err(PosetError::IndexOutOfRange { index: p, n }),
            });
        }
        Self::from_parents(&converted)
    }

    /// Adds a new element `n` above every root of a forest.
    ///
    /// The returned tree has `n + 1` elements and the new element is its root.
    pub fn augment_with_virtual_root(
        parents: &[Option<usize>],
    ) -> Result<(Self, ElementId), PosetError> {
        let n = parents.len();
        let roots = parents.iter().filter(|p| p.is_none()).count();
        if n == 0 {
            return Err(PosetError::Empty);
        }
        if roots == 1 {
            return Err(PosetError::SingleRootNoAugmentationNeeded);
        }
        let virtual_root = n;
        let mut augmented: Vec<Option<usize>> = parents
            .iter()
            .map(|p| Some(p.unwrap_or(virtual_root)))
            .collect();
        augmented.push(None);
        let tree = Self::from_parents(&augmented)?;
        Ok((tree, ElementId::from(virtual_root)))
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn root(&self) -> ElementId {
        self.root
    }

    pub fn parent(&self, v: ElementId) -> Option<ElementId> {
        self.parent[v.index()]
    }

    pub fn children(&self, v: ElementId) -> &[ElementId] {
        &self.children[v.index()]
    }

    pub fn depth(&self, v: ElementId) -> u32 {
        self.depth[v.index()]
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = ElementId> + Clone {
        (0..self.len()).map(ElementId::from)
    }

    /// Parent array in the `-1`-for-root encoding.
    pub fn signed_parents(&self) -> Vec<i64> {
        self.parent
            .iter()
            .map(|p| p.map_or(-1, |p| i64::from(p.raw())))
            .collect()
    }

    /// `u ≻ v` by walking parent links up from `v`. O(depth).
    pub fn is_strict_ancestor(&self, u: ElementId, v: ElementId) -> bool {
        let (du, mut dv) = (self.depth(u), self.depth(v));
        if du >= dv {
            return false;
        }
        let mut cur = v;
        while dv > du {
            cur = self.parent[cur.index()].expect("non-root has a parent");
            dv -= 1;
        }
        cur == u
    }

    pub fn subtree_sizes(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_unstable_by_key(|&v| std::cmp::Reverse(self.depth[v]));
        let mut size = vec![1usize; self.len()];
        for v in order {
            if let Some(p) = self.parent[v] {
                size[p.index()] += size[v];
            }
        }
        size
    }

    pub fn stats(&self) -> TreeStats {
        let max_children = self.children.iter().map(Vec::len).max().unwrap_or(0);
        TreeStats {
            n: self.len(),
            // one maximal element by construction
            max_degree: max_children.max(1),
            width: self.children.iter().filter(|c| c.is_empty()).count(),
            height: self.depth.iter().copied().max().unwrap_or(0) as usize,
        }
    }

    /// The `n − 1` (parent, child) pairs of the tree.
    pub fn ground_truth_edges(&self) -> EdgeSet {
        let edges = self
            .parent
            .iter()
            .enumerate()
            .filter_map(|(c, p)| p.map(|p| Edge::new(p, ElementId::from(c))))
            .collect();
        EdgeSet::from_edges(edges).expect("parent array has one parent per child")
    }
}

fn first_on_cycle(parents: &[Option<usize>]) -> ElementId {
    ElementId::from(walk_into_cycle(parents, 0))
}

// Follows parent links from `start` until a node repeats; that node is on a cycle.
fn walk_into_cycle(parents: &[Option<usize>], start: usize) -> usize {
    let mut seen = vec![false; parents.len()];
    let mut cur = start;
    while !seen[cur] {
        seen[cur] = true;
        match parents[cur] {
            Some(p) => cur = p,
            None => return start,
        }
    }
    cur
}

/// Shape parameters of a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStats {
    pub n: usize,
    /// Largest child count, and at least the number of roots (1).
    pub max_degree: usize,
    /// Number of leaves; in a tree this is the size of the largest antichain.
    pub width: usize,
    /// Edges on the longest root-to-leaf path.
    pub height: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub parent: ElementId,
    pub child: ElementId,
}

impl Edge {
    pub fn new(parent: ElementId, child: ElementId) -> Self {
        Edge { parent, child }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.parent, self.child)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EdgeSetError {
    #[error("element {child} is given two parents ({first} and {second})")]
    DuplicateChild {
        child: ElementId,
        first: ElementId,
        second: ElementId,
    },
    #[error("self loop on element {0}")]
    SelfLoop(ElementId),
}

/// A set of (parent, child) edges, kept sorted by child id.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeSet {
    edges: Vec<Edge>,
}

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet::default()
    }

    pub fn from_edges(mut edges: Vec<Edge>) -> Result<Self, EdgeSetError> {
        edges.sort_unstable_by_key(|e| (e.child, e.parent));
        for e in &edges {
            if e.parent == e.child {
                return Err(EdgeSetError::SelfLoop(e.child));
            }
        }
        for w in edges.windows(2) {
            if w[0].child == w[1].child {
                return Err(EdgeSetError::DuplicateChild {
                    child: w[0].child,
                    first: w[0].parent,
                    second: w[1].parent,
                });
            }
        }
        Ok(EdgeSet { edges })
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Edge> {
        self.edges.iter()
    }

    pub fn as_slice(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains(&self, edge: Edge) -> bool {
        self.edges
            .binary_search_by_key(&(edge.child, edge.parent), |e| (e.child, e.parent))
            .is_ok()
    }

    pub fn parent_of(&self, child: ElementId) -> Option<ElementId> {
        self.edges
            .binary_search_by_key(&child, |e| e.child)
            .ok()
            .map(|i| self.edges[i].parent)
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = &'a Edge;
    type IntoIter = std::slice::Iter<'a, Edge>;

    fn into_iter(self) -> Self::IntoIter {
        self.edges.iter()
    }
}
