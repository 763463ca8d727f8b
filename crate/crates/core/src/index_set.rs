//! Subsets of the isotropy summand indices.
//!
//! An [`IndexSet`] `J` stands for the intermediate subalgebra
//! `k = (sum of m_i over i in J) + h`. Internally indices are 0-based bits;
//! everything user-facing (display, serialization) is 1-based.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Largest number of summands representable by an [`IndexSet`].
pub const MAX_SUMMANDS: usize = 32;

/// A subset of `{0, .., s-1}` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct IndexSet(u32);

impl IndexSet {
    pub const EMPTY: IndexSet = IndexSet(0);

    pub const fn from_bits(bits: u32) -> Self {
        IndexSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    /// `{0, .., s-1}`.
    pub fn full(s: usize) -> Self {
        assert!(s <= MAX_SUMMANDS, "at most {MAX_SUMMANDS} summands");
        if s == MAX_SUMMANDS {
            IndexSet(u32::MAX)
        } else {
            IndexSet((1u32 << s) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        assert!(i < MAX_SUMMANDS);
        IndexSet(1 << i)
    }

    /// Builds a set from 0-based indices.
    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        indices
            .into_iter()
            .fold(IndexSet::EMPTY, |acc, i| acc.with(i))
    }

    /// Builds a set from 1-based indices, as they appear in files and reports.
    /// Returns `None` if an index is 0 or exceeds [`MAX_SUMMANDS`].
    pub fn from_one_based<I: IntoIterator<Item = usize>>(indices: I) -> Option<Self> {
        let mut set = IndexSet::EMPTY;
        for i in indices {
            if i == 0 || i > MAX_SUMMANDS {
                return None;
            }
            set = set.with(i - 1);
        }
        Some(set)
    }

    pub fn with(self, i: usize) -> Self {
        IndexSet(self.0 | (1 << i))
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_SUMMANDS && self.0 & (1 << i) != 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Complement inside `{0, .., s-1}`.
    pub fn complement(self, s: usize) -> Self {
        IndexSet(IndexSet::full(s).0 & !self.0)
    }

    pub fn is_subset_of(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_strict_subset_of(self, other: IndexSet) -> bool {
        self.is_subset_of(other) && self != other
    }

    pub fn union(self, other: IndexSet) -> Self {
        IndexSet(self.0 | other.0)
    }

    pub fn difference(self, other: IndexSet) -> Self {
        IndexSet(self.0 & !other.0)
    }

    /// Largest member plus one, i.e. the smallest `s` this set fits into.
    pub fn span(self) -> usize {
        (u32::BITS - self.0.leading_zeros()) as usize
    }

    /// Members in increasing order (0-based).
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    /// Members in increasing order (1-based).
    pub fn to_one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Position of `i` among the members, if present.
    pub fn rank_of(self, i: usize) -> Option<usize> {
        self.contains(i)
            .then(|| (self.0 & ((1u32 << i) - 1)).count_ones() as usize)
    }

    /// Lexicographic order on the sorted member lists.
    pub fn lex_cmp(self, other: IndexSet) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

#[derive(Clone)]
pub struct Iter(u32);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, i) in self.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for IndexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_one_based().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IndexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let indices = Vec::<usize>::deserialize(deserializer)?;
        IndexSet::from_one_based(indices)
            .ok_or_else(|| serde::de::Error::custom("summand indices must lie in 1..=32"))
    }
}
