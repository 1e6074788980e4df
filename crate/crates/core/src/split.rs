//! Splits: the axes of tree space.
//!
//! Removing an edge from a tree with leaves {0..n} bipartitions the leaf
//! set; the stored side is the one not containing label 0.  Label 0 is a
//! canonicalization anchor only.  Pendant edges are singleton sides (and
//! the side {1..n} for label 0's own pendant edge).

use std::collections::BTreeSet;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Split {
    n: u32,
    side: BTreeSet<u32>,
}

impl Split {
    /// Canonicalize a subset of {0..n} into a split: the stored side is the
    /// side not containing label 0.
    pub fn canonical(subset: &BTreeSet<u32>, n: u32) -> Result<Split> {
        if n < 2 {
            return Err(Error::InvalidSplit(format!("leaf count n = {n} too small")));
        }
        if let Some(&bad) = subset.iter().find(|&&x| x > n) {
            return Err(Error::InvalidSplit(format!("label {bad} exceeds n = {n}")));
        }
        if subset.is_empty() {
            return Err(Error::InvalidSplit("empty side".into()));
        }
        if subset.len() as u32 == n + 1 {
            return Err(Error::InvalidSplit("full leaf set is not a split".into()));
        }
        let side: BTreeSet<u32> = if subset.contains(&0) {
            (1..=n).filter(|x| !subset.contains(x)).collect()
        } else {
            subset.clone()
        };
        debug_assert!(!side.is_empty());
        Ok(Split { n, side })
    }

    /// The stored (label-0-free) side.
    pub fn side(&self) -> &BTreeSet<u32> {
        &self.side
    }

    pub fn leaf_count(&self) -> u32 {
        self.n
    }

    /// Pendant splits have a singleton side or the full side {1..n}
    /// (label 0's pendant edge); they are compatible with every other split.
    pub fn is_pendant(&self) -> bool {
        self.side.len() == 1 || self.side.len() as u32 == self.n
    }

    /// Internal (nontrivial) splits have at least two leaves on both sides.
    pub fn is_internal(&self) -> bool {
        !self.is_pendant()
    }

    /// The pendant split of a leaf label.
    pub fn pendant(leaf: u32, n: u32) -> Result<Split> {
        let subset: BTreeSet<u32> = [leaf].into_iter().collect();
        Split::canonical(&subset, n)
    }
}

impl std::fmt::Display for Split {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let labels: Vec<String> = self.side.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", labels.join(","))
    }
}

/// Two splits are compatible when one of the four side intersections is
/// empty.  A split is never compatible with itself.
pub fn splits_compatible(a: &Split, b: &Split) -> Result<bool> {
    if a.n != b.n {
        return Err(Error::LeafCountMismatch(a.n, b.n));
    }
    if a == b {
        return Ok(false);
    }
    // Both complements contain label 0, so compatibility reduces to the
    // stored sides being disjoint or nested.
    let disjoint = a.side.intersection(&b.side).next().is_none();
    Ok(disjoint || a.side.is_subset(&b.side) || b.side.is_subset(&a.side))
}

/// All canonical splits of {0..n}: the nonempty subsets of {1..n}.
pub fn all_splits(n: u32) -> Vec<Split> {
    assert!((2..=20).contains(&n), "split enumeration is for small n");
    let mut out = Vec::with_capacity((1usize << n) - 1);
    for mask in 1u32..(1 << n) {
        let side: BTreeSet<u32> = (1..=n).filter(|i| mask & (1 << (i - 1)) != 0).collect();
        out.push(Split { n, side });
    }
    out.sort();
    out
}
