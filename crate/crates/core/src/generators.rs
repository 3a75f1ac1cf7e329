//! Seeded tree families for correctness and scaling experiments.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poset::{ElementId, TreePoset};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    /// `0 ≻ 1 ≻ … ≻ n−1`
    Chain,
    /// Root `0` with `n − 1` leaves.
    Star,
    /// Complete `d`-ary tree in BFS order, rounded down to the largest
    /// complete tree with at most `n` elements.
    CompleteDary,
    /// Each new element attaches to a uniformly chosen earlier element that
    /// still has fewer than `d` children.
    RandomAttachment,
    /// Caterpillar where element `i ≥ 1` hangs off `d·⌊(i−1)/d⌋`: every
    /// internal element has `d − 1` leaf children and one child that
    /// continues the spine.
    LbFamily,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 5] = [
        FamilyKind::Chain,
        FamilyKind::Star,
        FamilyKind::CompleteDary,
        FamilyKind::RandomAttachment,
        FamilyKind::LbFamily,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Chain => "chain",
            FamilyKind::Star => "star",
            FamilyKind::CompleteDary => "complete_dary",
            FamilyKind::RandomAttachment => "random_attachment",
            FamilyKind::LbFamily => "lb_family",
        }
    }

    /// Whether `d` shapes the family.
    pub fn uses_degree(self) -> bool {
        !matches!(self, FamilyKind::Chain | FamilyKind::Star)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FamilyKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FamilyKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown tree family {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    pub n: usize,
    /// Degree parameter; ignored by chains and stars.
    pub d: usize,
    /// Only random families read the seed.
    pub seed: u64,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind, n: usize, d: usize, seed: u64) -> Self {
        FamilySpec { kind, n, d, seed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid family spec: {0}")]
    InvalidSpec(String),
}

/// Builds the tree described by `spec`. Same spec, same parent array.
pub fn generate(spec: &FamilySpec) -> Result<TreePoset, GenerateError> {
    let parents = parent_array(spec)?;
    Ok(TreePoset::from_parents(&parents).expect("generators emit valid trees"))
}

/// Parent array (root has `None`) of the tree described by `spec`.
pub fn parent_array(spec: &FamilySpec) -> Result<Vec<Option<usize>>, GenerateError> {
    let FamilySpec { kind, n, d, seed } = *spec;
    if n == 0 {
        return Err(GenerateError::InvalidSpec("n must be at least 1".into()));
    }
    if n > u32::MAX as usize {
        return Err(GenerateError::InvalidSpec(format!("n = {n} is too large")));
    }
    if kind.uses_degree() && d == 0 {
        return Err(GenerateError::InvalidSpec(format!("{kind} needs d ≥ 1")));
    }
    let with_parent = |f: &dyn Fn(usize) -> usize, len: usize| {
        (0..len)
            .map(|i| if i == 0 { None } else { Some(f(i)) })
            .collect::<Vec<_>>()
    };
    Ok(match kind {
        FamilyKind::Chain => with_parent(&|i| i - 1, n),
        FamilyKind::Star => with_parent(&|_| 0, n),
        FamilyKind::CompleteDary if d == 1 => with_parent(&|i| i - 1, n),
        FamilyKind::CompleteDary => with_parent(&|i| (i - 1) / d, complete_size(n, d)),
        FamilyKind::LbFamily => with_parent(&|i| d * ((i - 1) / d), n),
        FamilyKind::RandomAttachment => random_attachment(n, d, seed),
    })
}

/// Largest `1 + d + … + d^k` not exceeding `n`.
fn complete_size(n: usize, d: usize) -> usize {
    let (mut total, mut level) = (1usize, 1usize);
    loop {
        let Some(next_level) = level.checked_mul(d) else {
            return total;
        };
        match total.checked_add(next_level) {
            Some(next) if next <= n => {
                total = next;
                level = next_level;
            }
            _ => return total,
        }
    }
}

fn random_attachment(n: usize, d: usize, seed: u64) -> Vec<Option<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut parents = Vec::with_capacity(n);
    let mut child_count = vec![0usize; n];
    // elements that can still take a child
    let mut open: Vec<usize> = Vec::with_capacity(n);
    parents.push(None);
    open.push(0);
    for v in 1..n {
        let slot = rng.random_range(0..open.len());
        let p = open[slot];
        parents.push(Some(p));
        child_count[p] += 1;
        if child_count[p] == d {
            open.swap_remove(slot);
        }
        open.push(v);
    }
    parents
}

/// Unordered pairs of leaves that share a parent.
pub fn childless_sibling_pairs(tree: &TreePoset) -> Vec<(ElementId, ElementId)> {
    let mut pairs = Vec::new();
    for v in tree.elements() {
        let leaves: Vec<ElementId> = tree
            .children(v)
            .iter()
            .copied()
            .filter(|&c| tree.children(c).is_empty())
            .collect();
        for (i, &a) in leaves.iter().enumerate() {
            for &b in &leaves[i + 1..] {
                pairs.push((a, b));
            }
        }
    }
    pairs
}
