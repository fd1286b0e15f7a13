use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Integer partition with trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
    weight: usize,
}

impl Partition {
    /// Builds a partition from weakly decreasing parts; zeros at the end are dropped.
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Precondition(format!(
                "partition parts must be weakly decreasing: {parts:?}"
            )));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        let weight = parts.iter().sum();
        Ok(Self { parts, weight })
    }

    pub(crate) fn from_trimmed(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] >= w[1]));
        debug_assert!(parts.last() != Some(&0));
        let weight = parts.iter().sum();
        Self { parts, weight }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// |κ|
    pub fn weight(&self) -> usize {
        self.weight
    }

    /// l(κ), the number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    /// Part `i` (0-based), zero past the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Largest part, zero for the empty partition.
    pub fn largest(&self) -> usize {
        self.part(0)
    }

    /// Conjugate partition as a plain vector: entry `j` counts parts > j.
    pub fn conjugate(&self) -> Vec<usize> {
        let mut conj = vec![0; self.largest()];
        for &p in &self.parts {
            for c in conj.iter_mut().take(p) {
                *c += 1;
            }
        }
        conj
    }

    /// Whether the diagram of `other` fits inside this one.
    pub fn contains(&self, other: &Partition) -> bool {
        other.len() <= self.len() && other.parts.iter().zip(&self.parts).all(|(a, b)| a <= b)
    }

    /// Removes the last cell of the last row. Returns the smaller partition and
    /// the 0-based row the cell came from.
    pub fn without_last_cell(&self) -> Option<(Partition, usize)> {
        let row = self.parts.len().checked_sub(1)?;
        let mut parts = self.parts.clone();
        parts[row] -= 1;
        if parts[row] == 0 {
            parts.pop();
        }
        Some((Self::from_trimmed(parts), row))
    }

    /// Decreasing lexicographic comparison: `Less` means `self` comes first.
    pub fn cmp_desc_lex(&self, other: &Partition) -> Ordering {
        other.parts.cmp(&self.parts)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Every partition of `k` with at most `max_len` parts, each at most
/// `max_part` (`None` = unbounded), in decreasing lexicographic order.
pub fn partitions_of(k: usize, max_len: usize, max_part: Option<usize>) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    let cap = max_part.unwrap_or(k).min(k);
    fill(k, max_len, cap, &mut prefix, &mut out);
    out
}

fn fill(rest: usize, slots: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if rest == 0 {
        out.push(Partition::from_trimmed(prefix.clone()));
        return;
    }
    if slots == 0 || slots * cap < rest {
        return;
    }
    for first in (1..=cap.min(rest)).rev() {
        prefix.push(first);
        fill(rest - first, slots - 1, first, prefix, out);
        prefix.pop();
    }
}

/// All partitions of weight `0..=max_weight` in the given box, ordered by
/// weight and then decreasing lexicographically.
pub fn partitions_up_to(max_weight: usize, max_len: usize, max_part: Option<usize>) -> Vec<Partition> {
    (0..=max_weight)
        .flat_map(|k| partitions_of(k, max_len, max_part))
        .collect()
}

/// Every partition whose diagram fits inside `kappa`, ordered like
/// [`partitions_up_to`].
pub fn subpartitions(kappa: &Partition) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    sub_fill(kappa.parts(), 0, usize::MAX, &mut prefix, &mut out);
    out.sort_by(|a, b| a.weight().cmp(&b.weight()).then(a.cmp_desc_lex(b)));
    out
}

fn sub_fill(bound: &[usize], row: usize, cap: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
    out.push(Partition::from_trimmed(prefix.clone()));
    if row == bound.len() {
        return;
    }
    for v in 1..=bound[row].min(cap) {
        prefix.push(v);
        sub_fill(bound, row + 1, v, prefix, out);
        prefix.pop();
    }
}
