//! Centroid and pseudo-centroid search.
//!
//! Both searches pick a random element `x`, walk the chain of its ancestors
//! and binary search for the lowest element whose subtree still holds about
//! half the set. The exact search measures subtree sizes directly; the
//! pseudo-centroid search estimates them from a sample `V` and only sorts a
//! sample `Z` of the chain, refining inside the window between two
//! consecutive sampled elements.

use rand::Rng;

use crate::oracle::{Oracle, QueryOutcome};
use crate::poset::ElementId;

use super::subroutines::{
    find_minimal, get_root, partition_into_subtrees, sort_chain, subtree_size_unchecked,
};
use super::{ceil_log2, SortError};

/// Below this size the pseudo-centroid search returns the exact centroid.
pub const PSEUDO_CENTROID_MIN_SIZE: usize = 64;

/// Failed sampling rounds allowed per `⌈log₂ n⌉` before falling back to an
/// exhaustive scan.
const RETRY_BUDGET_PER_LOG: u32 = 64;

/// Result of a separator search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Separator {
    pub element: ElementId,
    /// Sampling rounds executed (the initial random candidate is not a round).
    pub rounds: u32,
    /// Rounds whose candidate was rejected.
    pub retries: u32,
    /// The retry budget ran out and the exact centroid was computed by scanning.
    pub exhausted: bool,
}

/// The set split around a separator `c`.
#[derive(Debug, Clone)]
pub(crate) struct Split {
    /// Subtrees of `c`'s children, each with its root first.
    pub children: Vec<Vec<ElementId>>,
    /// Everything outside `Sub_c`, in input order.
    pub rest: Vec<ElementId>,
    /// Elements above `c`, in input order.
    pub ancestors: Vec<ElementId>,
}

impl Split {
    fn max_child(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Criterion {
    Centroid,
    Pseudo,
}

impl Criterion {
    fn subtree_large_enough(self, subtree: usize, n: usize) -> bool {
        match self {
            Criterion::Centroid => 2 * subtree >= n,
            Criterion::Pseudo => 4 * subtree >= n,
        }
    }
}

/// Splits `set` around `c`, returning `None` as soon as `c` is shown not to
/// satisfy `criterion`. Children are only partitioned when `Sub_c` is large
/// enough.
fn split_if<O: Oracle>(
    set: &[ElementId],
    c: ElementId,
    criterion: Criterion,
    oracle: &mut O,
) -> Result<Option<Split>, SortError> {
    let n = set.len();
    let mut below = Vec::new();
    let mut rest = Vec::new();
    let mut ancestors = Vec::new();
    for &y in set {
        if y == c {
            continue;
        }
        match oracle.query(c, y)? {
            QueryOutcome::Dominates => below.push(y),
            QueryOutcome::DominatedBy => {
                ancestors.push(y);
                rest.push(y);
            }
            QueryOutcome::Incomparable => rest.push(y),
        }
    }
    if !criterion.subtree_large_enough(below.len() + 1, n) {
        return Ok(None);
    }
    let split = Split {
        children: partition_into_subtrees(below, oracle)?,
        rest,
        ancestors,
    };
    Ok((2 * split.max_child() < n).then_some(split))
}

/// Whether `c` is the centroid of `set`: `|Sub_c| ≥ n/2` and every child
/// subtree is smaller than `n/2`.
pub fn is_centroid<O: Oracle>(
    set: &[ElementId],
    c: ElementId,
    oracle: &mut O,
) -> Result<bool, SortError> {
    if !set.contains(&c) {
        return Err(SortError::ElementNotInSet(c));
    }
    Ok(split_if(set, c, Criterion::Centroid, oracle)?.is_some())
}

/// Whether `c` is a pseudo-centroid of `set`: `|Sub_c| ≥ n/4` and every
/// child subtree is smaller than `n/2`.
pub fn is_pseudo_centroid<O: Oracle>(
    set: &[ElementId],
    c: ElementId,
    oracle: &mut O,
) -> Result<bool, SortError> {
    if !set.contains(&c) {
        return Err(SortError::ElementNotInSet(c));
    }
    Ok(split_if(set, c, Criterion::Pseudo, oracle)?.is_some())
}

/// `x` together with every element of `set` above it, unsorted.
fn chain_above<O: Oracle>(
    set: &[ElementId],
    x: ElementId,
    oracle: &mut O,
) -> Result<Vec<ElementId>, SortError> {
    let mut chain = vec![x];
    for &y in set {
        if y != x && oracle.query(x, y)? == QueryOutcome::DominatedBy {
            chain.push(y);
        }
    }
    Ok(chain)
}

/// Largest index `i` in `0..len` with `holds(i)`, given that `holds(0)` is
/// known to be true and `holds` is monotone (true then false).
fn last_true<F>(len: usize, mut holds: F) -> Result<usize, SortError>
where
    F: FnMut(usize) -> Result<bool, SortError>,
{
    let (mut lo, mut hi) = (0, len - 1);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

fn retry_budget(n: usize) -> u32 {
    RETRY_BUDGET_PER_LOG * ceil_log2(n).max(1)
}

/// Exact centroid by measuring every subtree: the elements with
/// `|Sub| ≥ n/2` form a chain and the lowest of them is the centroid.
fn scan_for_centroid<O: Oracle>(set: &[ElementId], oracle: &mut O) -> Result<ElementId, SortError> {
    let n = set.len();
    let mut best: Option<(usize, ElementId)> = None;
    for &x in set {
        let size = subtree_size_unchecked(x, set, oracle)?;
        if 2 * size >= n && best.is_none_or(|(s, _)| size < s) {
            best = Some((size, x));
        }
    }
    best.map(|(_, x)| x).ok_or(SortError::EmptySet)
}

fn exact_split<O: Oracle>(
    set: &[ElementId],
    c: ElementId,
    criterion: Criterion,
    oracle: &mut O,
) -> Result<Split, SortError> {
    // a true centroid satisfies both criteria
    split_if(set, c, criterion, oracle)?.ok_or(SortError::InconsistentOracle(
        "exhaustive centroid failed verification",
    ))
}

pub(crate) fn locate_centroid<O: Oracle, R: Rng + ?Sized>(
    set: &[ElementId],
    oracle: &mut O,
    rng: &mut R,
) -> Result<(Separator, Split), SortError> {
    let n = set.len();
    let done = |element, rounds, retries, exhausted, split| {
        Ok((
            Separator {
                element,
                rounds,
                retries,
                exhausted,
            },
            split,
        ))
    };
    match n {
        0 => return Err(SortError::EmptySet),
        1 => {
            let split = Split {
                children: Vec::new(),
                rest: Vec::new(),
                ancestors: Vec::new(),
            };
            return done(set[0], 0, 0, false, split);
        }
        2 => {
            // with two elements the lower one is the centroid
            let lower = find_minimal(set, oracle)?;
            let split = exact_split(set, lower, Criterion::Centroid, oracle)?;
            return done(lower, 0, 0, false, split);
        }
        _ => {}
    }

    let mut candidate = set[rng.random_range(0..n)];
    let mut accepted = split_if(set, candidate, Criterion::Centroid, oracle)?;
    let (mut rounds, mut retries) = (0u32, 0u32);
    let budget = retry_budget(n);
    while accepted.is_none() {
        if retries >= budget {
            let c = scan_for_centroid(set, oracle)?;
            let split = exact_split(set, c, Criterion::Centroid, oracle)?;
            return done(c, rounds, retries, true, split);
        }
        rounds += 1;
        let x = set[rng.random_range(0..n)];
        let chain = sort_chain(&chain_above(set, x, oracle)?, oracle)?;
        let i = last_true(chain.len(), |i| {
            Ok(2 * subtree_size_unchecked(chain[i], set, oracle)? >= n)
        })?;
        candidate = chain[i];
        accepted = split_if(set, candidate, Criterion::Centroid, oracle)?;
        if accepted.is_none() {
            retries += 1;
        }
    }
    done(candidate, rounds, retries, false, accepted.unwrap())
}

/// Finds the centroid of `set`, which must have exactly one maximal element.
pub fn get_centroid<O: Oracle, R: Rng + ?Sized>(
    set: &[ElementId],
    oracle: &mut O,
    rng: &mut R,
) -> Result<Separator, SortError> {
    locate_centroid(set, oracle, rng).map(|(sep, _)| sep)
}

/// Sampled subtree-size estimator: `S'_j = |Sub_j ∩ V| / p`, compared
/// against the threshold `n/2 − 1/p`.
struct Estimator<'a> {
    sample: &'a [ElementId],
    p: f64,
    threshold: f64,
}

impl Estimator<'_> {
    fn reaches_threshold<O: Oracle>(
        &self,
        j: ElementId,
        oracle: &mut O,
    ) -> Result<bool, SortError> {
        let mut hits = 0usize;
        for &v in self.sample {
            if v == j || oracle.dominates(j, v)? {
                hits += 1;
            }
        }
        Ok(hits as f64 / self.p >= self.threshold)
    }
}

/// Sampling probability `min(1/2, 1/log₂ n)`.
pub(crate) fn sampling_probability(n: usize) -> f64 {
    let log = (n as f64).log2();
    if log <= 2.0 {
        0.5
    } else {
        1.0 / log
    }
}

pub(crate) fn locate_pseudo_centroid<O: Oracle, R: Rng + ?Sized>(
    set: &[ElementId],
    oracle: &mut O,
    rng: &mut R,
) -> Result<(Separator, Split), SortError> {
    let n = set.len();
    if n < PSEUDO_CENTROID_MIN_SIZE {
        return locate_centroid(set, oracle, rng);
    }
    let p = sampling_probability(n);
    let root = get_root(set, oracle)?;

    let mut candidate = set[rng.random_range(0..n)];
    let mut accepted = split_if(set, candidate, Criterion::Pseudo, oracle)?;
    let (mut rounds, mut retries) = (0u32, 0u32);
    let budget = retry_budget(n);
    while accepted.is_none() {
        if retries >= budget {
            let c = scan_for_centroid(set, oracle)?;
            let split = exact_split(set, c, Criterion::Pseudo, oracle)?;
            let sep = Separator {
                element: c,
                rounds,
                retries,
                exhausted: true,
            };
            return Ok((sep, split));
        }
        rounds += 1;

        let sample: Vec<ElementId> = set.iter().copied().filter(|_| rng.random_bool(p)).collect();
        let estimator = Estimator {
            sample: &sample,
            p,
            threshold: n as f64 / 2.0 - 1.0 / p,
        };
        let x = set[rng.random_range(0..n)];
        let above = chain_above(set, x, oracle)?;
        let mut picked = vec![root];
        picked.extend(
            above
                .iter()
                .copied()
                .filter(|&y| y != root && rng.random_bool(p)),
        );
        let picked = sort_chain(&picked, oracle)?;

        if estimator.reaches_threshold(picked[0], oracle)? {
            let i = last_true(picked.len(), |i| {
                estimator.reaches_threshold(picked[i], oracle)
            })?;
            let top = picked[i];
            let next = picked.get(i + 1).copied();
            let mut window = vec![top];
            for &u in &above {
                if u == top || Some(u) == next {
                    continue;
                }
                if !oracle.dominates(top, u)? {
                    continue;
                }
                if let Some(bottom) = next {
                    if !oracle.dominates(u, bottom)? {
                        continue;
                    }
                }
                window.push(u);
            }
            let window = sort_chain(&window, oracle)?;
            let j = last_true(window.len(), |j| {
                estimator.reaches_threshold(window[j], oracle)
            })?;
            candidate = window[j];
            accepted = split_if(set, candidate, Criterion::Pseudo, oracle)?;
        }
        if accepted.is_none() {
            retries += 1;
        }
    }
    let sep = Separator {
        element: candidate,
        rounds,
        retries,
        exhausted: false,
    };
    Ok((sep, accepted.unwrap()))
}

/// Finds a pseudo-centroid of `set`, which must have exactly one maximal
/// element. Sets smaller than [`PSEUDO_CENTROID_MIN_SIZE`] get the exact
/// centroid.
pub fn get_pseudo_centroid<O: Oracle, R: Rng + ?Sized>(
    set: &[ElementId],
    oracle: &mut O,
    rng: &mut R,
) -> Result<Separator, SortError> {
    locate_pseudo_centroid(set, oracle, rng).map(|(sep, _)| sep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::CountingOracle;
    use crate::poset::{ids, TreePoset};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tree(parents: &[i64]) -> TreePoset {
        TreePoset::from_signed_parents(parents).unwrap()
    }

    fn chain(n: usize) -> TreePoset {
        let parents: Vec<i64> = (0..n as i64).map(|i| i - 1).collect();
        tree(&parents)
    }

    #[test]
    fn centroid_of_chain_of_five() {
        let t = chain(5);
        for seed in 0..20 {
            let mut o = CountingOracle::new(&t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sep = get_centroid(&ids(0..5), &mut o, &mut rng).unwrap();
            assert_eq!(sep.element, ElementId::new(2));
        }
    }

    #[test]
    fn centroid_of_complete_binary_tree_is_root() {
        let t = tree(&[-1, 0, 0, 1, 1, 2, 2]);
        for seed in 0..20 {
            let mut o = CountingOracle::new(&t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sep = get_centroid(&ids(0..7), &mut o, &mut rng).unwrap();
            assert_eq!(sep.element, ElementId::new(0));
        }
    }

    #[test]
    fn centroid_of_tiny_sets() {
        let t = chain(2);
        let mut o = CountingOracle::new(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(
            get_centroid(&ids([1]), &mut o, &mut rng).unwrap().element,
            ElementId::new(1)
        );
        assert_eq!(o.total_queries(), 0);
        // {0 ≻ 1}: Sub_1 = 1 ≥ 2/2, so the leaf is the centroid
        assert_eq!(
            get_centroid(&ids([0, 1]), &mut o, &mut rng)
                .unwrap()
                .element,
            ElementId::new(1)
        );
        assert_eq!(
            get_centroid(&[], &mut o, &mut rng),
            Err(SortError::EmptySet)
        );
    }

    #[test]
    fn pseudo_centroid_small_sets_use_exact_centroid() {
        let t = chain(8);
        for seed in 0..20 {
            let mut o = CountingOracle::new(&t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sep = get_pseudo_centroid(&ids(0..8), &mut o, &mut rng).unwrap();
            // n/4 = 2 ≤ |Sub| and children < 4: elements 4, 5, 6; exact centroid is 4
            assert_eq!(sep.element, ElementId::new(4));
        }
        let star = tree(&[-1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let mut o = CountingOracle::new(&star);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sep = get_pseudo_centroid(&ids(0..9), &mut o, &mut rng).unwrap();
        assert_eq!(sep.element, ElementId::new(0));
    }

    #[test]
    fn pseudo_centroid_on_long_chain_satisfies_definition() {
        let n = 512;
        let t = chain(n);
        for seed in 0..30 {
            let mut o = CountingOracle::new(&t);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sep = get_pseudo_centroid(&ids(0..n), &mut o, &mut rng).unwrap();
            // element i has subtree n - i; need n - i ≥ n/4 and n - i - 1 < n/2
            let i = sep.element.index();
            assert!(4 * (n - i) >= n && 2 * (n - i - 1) < n, "got {i}");
        }
    }

    #[test]
    fn pseudo_centroid_on_star_is_root() {
        let mut parents = vec![-1i64];
        parents.extend(std::iter::repeat_n(0, 99));
        let t = tree(&parents);
        let mut o = CountingOracle::new(&t);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sep = get_pseudo_centroid(&ids(0..100), &mut o, &mut rng).unwrap();
        assert_eq!(sep.element, ElementId::new(0));
    }

    #[test]
    fn definition_checks() {
        let t = chain(8);
        let mut o = CountingOracle::new(&t);
        let all = ids(0..8);
        let pseudo: Vec<usize> = (0..8)
            .filter(|&i| is_pseudo_centroid(&all, ElementId::from(i), &mut o).unwrap())
            .collect();
        assert_eq!(pseudo, vec![4, 5, 6]);
        let centroid: Vec<usize> = (0..8)
            .filter(|&i| is_centroid(&all, ElementId::from(i), &mut o).unwrap())
            .collect();
        assert_eq!(centroid, vec![4]);
    }

    #[test]
    fn scan_matches_definition() {
        let t = tree(&[-1, 0, 0, 1, 1, 3, 3, 3, 2]);
        let mut o = CountingOracle::new(&t);
        let all = ids(0..9);
        let c = scan_for_centroid(&all, &mut o).unwrap();
        // sizes: 0:9, 1:6, 3:4 ≥ 4.5? no; so centroid is 1
        assert_eq!(c, ElementId::new(1));
        assert!(is_centroid(&all, c, &mut o).unwrap());
    }

    #[test]
    fn sampling_probability_is_capped() {
        assert_eq!(sampling_probability(2), 0.5);
        assert_eq!(sampling_probability(4), 0.5);
        assert!((sampling_probability(64) - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn last_true_finds_boundary() {
        let v = [true, true, true, false, false];
        assert_eq!(last_true(5, |i| Ok(v[i])).unwrap(), 2);
        assert_eq!(last_true(1, |_| Ok(true)).unwrap(), 0);
    }
}
