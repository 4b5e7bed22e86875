//! Fixed-width vertex sets.

use std::cmp::Ordering;
use std::fmt;

use fixedbitset::FixedBitSet;
use serde::{Serialize, Serializer};

/// A subset of the vertices `0..width` of a graph.
///
/// The width is fixed at construction and every set-algebra operation
/// requires both operands to share it.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(width: usize) -> Self {
        VertexSet {
            bits: FixedBitSet::with_capacity(width),
        }
    }

    pub fn full(width: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(width);
        bits.insert_range(..);
        VertexSet { bits }
    }

    pub fn singleton(width: usize, v: usize) -> Self {
        let mut s = Self::empty(width);
        s.insert(v);
        s
    }

    /// Builds a set from vertex ids. Panics if an id is out of range.
    pub fn from_ids<I: IntoIterator<Item = usize>>(width: usize, ids: I) -> Self {
        let mut s = Self::empty(width);
        for v in ids {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.width(), "vertex {v} outside width {}", self.width());
        self.bits.insert(v);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.width()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.bits.ones().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    fn check_width(&self, other: &Self) {
        assert_eq!(self.width(), other.width(), "vertex sets of different widths");
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_width(other);
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check_width(other);
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.check_width(other);
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> Self {
        let mut s = self.clone();
        s.bits.toggle_range(..);
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_width(other);
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_width(other);
        self.bits.is_disjoint(&other.bits)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    /// Compares the sorted id sequences lexicographically, so `{0,5}` sorts
    /// before `{1}` and `{0}` before `{0,1}`.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// Canonical order: cardinality first, then [`VertexSet::lex_cmp`].
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.lex_cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}
