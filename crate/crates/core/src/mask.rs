use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// A subset of a parent loop's elements, stored as a bitset.
///
/// Masks produced by the subloop engine always contain the identity and are
/// closed under the parent product; the type itself does not enforce that so
/// it can also carry intermediate sets (cosets, generator sets).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SubloopMask {
    parent_order: usize,
    words: Vec<u64>,
}

impl SubloopMask {
    pub fn empty(parent_order: usize) -> Self {
        SubloopMask { parent_order, words: vec![0; parent_order.div_ceil(64)] }
    }

    /// The trivial subloop `{0}`.
    pub fn trivial(parent_order: usize) -> Self {
        let mut m = Self::empty(parent_order);
        m.insert(0);
        m
    }

    pub fn full(parent_order: usize) -> Self {
        let mut m = Self::empty(parent_order);
        for i in 0..parent_order {
            m.insert(i);
        }
        m
    }

    pub fn from_indices(parent_order: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut m = Self::empty(parent_order);
        for i in indices {
            m.insert(i);
        }
        m
    }

    pub fn parent_order(&self) -> usize {
        self.parent_order
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.parent_order && self.words[i >> 6] & (1 << (i & 63)) != 0
    }

    /// Inserts `i`, returning true if it was not already present.
    #[inline]
    pub fn insert(&mut self, i: usize) -> bool {
        assert!(i < self.parent_order, "index {i} outside parent of order {}", self.parent_order);
        let w = &mut self.words[i >> 6];
        let bit = 1 << (i & 63);
        let fresh = *w & bit == 0;
        *w |= bit;
        fresh
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.parent_order
    }

    /// True when the mask is exactly `{0}`.
    pub fn is_trivial(&self) -> bool {
        self.len() == 1 && self.contains(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let tz = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + tz)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &SubloopMask) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &SubloopMask) -> SubloopMask {
        SubloopMask {
            parent_order: self.parent_order,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    pub fn union(&self, other: &SubloopMask) -> SubloopMask {
        SubloopMask {
            parent_order: self.parent_order,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect(),
        }
    }

    /// Smallest element not in the mask, if any.
    pub fn first_missing(&self) -> Option<usize> {
        (0..self.parent_order).find(|&i| !self.contains(i))
    }
}

impl Ord for SubloopMask {
    /// Orders by size, then lexicographically by sorted element list.
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for SubloopMask {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for SubloopMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

// Masks go over the wire as sorted index arrays; the parent order is implied by context.
impl Serialize for SubloopMask {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// Deserialized masks take the smallest parent order that fits; callers
/// re-anchor them with [`SubloopMask::from_indices`] when the parent is known.
impl<'de> Deserialize<'de> for SubloopMask {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = Vec::deserialize(d)?;
        let n = v.iter().max().map_or(1, |m| m + 1);
        Ok(SubloopMask::from_indices(n, v))
    }
}
