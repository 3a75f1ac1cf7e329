use crate::oracle::{Oracle, QueryOutcome};
use crate::poset::ElementId;

use super::SortError;

/// Returns a maximal element of `set` with exactly `|set| − 1` queries.
///
/// Keeps a running maximum and replaces it only when a later element
/// dominates it, so among several maximal elements the first one wins.
pub fn get_root<O: Oracle>(set: &[ElementId], oracle: &mut O) -> Result<ElementId, SortError> {
    let (&first, rest) = set.split_first().ok_or(SortError::EmptySet)?;
    let mut best = first;
    for &h in rest {
        if oracle.dominates(h, best)? {
            best = h;
        }
    }
    Ok(best)
}

/// Dual of [`get_root`]: a minimal element of `set` in `|set| − 1` queries.
pub fn find_minimal<O: Oracle>(set: &[ElementId], oracle: &mut O) -> Result<ElementId, SortError> {
    let (&first, rest) = set.split_first().ok_or(SortError::EmptySet)?;
    let mut low = first;
    for &h in rest {
        if oracle.dominates(low, h)? {
            low = h;
        }
    }
    Ok(low)
}

fn ensure_member(set: &[ElementId], x: ElementId) -> Result<(), SortError> {
    if set.contains(&x) {
        Ok(())
    } else {
        Err(SortError::ElementNotInSet(x))
    }
}

/// `|{x} ∪ {y ∈ set : x ≻ y}|`, using `|set| − 1` queries.
pub fn subtree_size<O: Oracle>(
    x: ElementId,
    set: &[ElementId],
    oracle: &mut O,
) -> Result<usize, SortError> {
    ensure_member(set, x)?;
    subtree_size_unchecked(x, set, oracle)
}

pub(crate) fn subtree_size_unchecked<O: Oracle>(
    x: ElementId,
    set: &[ElementId],
    oracle: &mut O,
) -> Result<usize, SortError> {
    let mut size = 1;
    for &y in set {
        if y != x && oracle.dominates(x, y)? {
            size += 1;
        }
    }
    Ok(size)
}

/// Partitions the descendants of `r` within `set` into the subtrees of
/// `r`'s children. Each returned group lists its root (the child) first;
/// groups come in discovery order.
pub fn get_subtrees_of_children<O: Oracle>(
    set: &[ElementId],
    r: ElementId,
    oracle: &mut O,
) -> Result<Vec<Vec<ElementId>>, SortError> {
    ensure_member(set, r)?;
    let mut below = Vec::new();
    for &x in set {
        if x != r && oracle.dominates(r, x)? {
            below.push(x);
        }
    }
    partition_into_subtrees(below, oracle)
}

/// Splits a downward-closed set into its maximal subtrees: repeatedly take a
/// maximal element and peel off everything it dominates.
pub(crate) fn partition_into_subtrees<O: Oracle>(
    mut rest: Vec<ElementId>,
    oracle: &mut O,
) -> Result<Vec<Vec<ElementId>>, SortError> {
    let mut groups = Vec::new();
    while !rest.is_empty() {
        let top = get_root(&rest, oracle)?;
        let mut group = vec![top];
        let mut remaining = Vec::with_capacity(rest.len());
        for &y in &rest {
            if y == top {
                continue;
            }
            if oracle.dominates(top, y)? {
                group.push(y);
            } else {
                remaining.push(y);
            }
        }
        groups.push(group);
        rest = remaining;
    }
    Ok(groups)
}

/// Sorts a chain from its top element down with a merge sort, at most
/// `⌈n log₂ n⌉` queries.
///
/// Fails with [`SortError::NotAChain`] if two elements turn out incomparable.
pub fn sort_chain<O: Oracle>(
    chain: &[ElementId],
    oracle: &mut O,
) -> Result<Vec<ElementId>, SortError> {
    let mut items = chain.to_vec();
    let mut scratch = items.clone();
    merge_sort(&mut items, &mut scratch, oracle)?;
    Ok(items)
}

fn merge_sort<O: Oracle>(
    items: &mut [ElementId],
    scratch: &mut [ElementId],
    oracle: &mut O,
) -> Result<(), SortError> {
    let n = items.len();
    if n <= 1 {
        return Ok(());
    }
    let mid = n / 2;
    merge_sort(&mut items[..mid], &mut scratch[..mid], oracle)?;
    merge_sort(&mut items[mid..], &mut scratch[mid..], oracle)?;

    scratch.copy_from_slice(items);
    let (left, right) = scratch.split_at(mid);
    let (mut i, mut j) = (0, 0);
    for slot in items.iter_mut() {
        let take_left = if i == left.len() {
            false
        } else if j == right.len() {
            true
        } else {
            match oracle.query(left[i], right[j])? {
                QueryOutcome::Dominates => true,
                QueryOutcome::DominatedBy => false,
                QueryOutcome::Incomparable => return Err(SortError::NotAChain(left[i], right[j])),
            }
        };
        if take_left {
            *slot = left[i];
            i += 1;
        } else {
            *slot = right[j];
            j += 1;
        }
    }
    Ok(())
}
