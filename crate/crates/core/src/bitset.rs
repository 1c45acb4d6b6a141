//! Fixed-domain bit sets used for subsets of finite carriers and point sets.

use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

const WORD: usize = 64;

/// A subset of `0..domain`, stored one bit per element.
///
/// Ordering is subset-lexicographic: two sets are compared by their sorted
/// member lists, so `{0} < {0, 1} < {1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    domain: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(domain: usize) -> Self {
        BitSet {
            domain,
            words: vec![0; domain.div_ceil(WORD)],
        }
    }

    pub fn full(domain: usize) -> Self {
        let mut s = BitSet::new(domain);
        for (i, w) in s.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let hi = (lo + WORD).min(domain);
            *w = if hi - lo == WORD {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        s
    }

    pub fn from_elems<I: IntoIterator<Item = usize>>(domain: usize, elems: I) -> Self {
        let mut s = BitSet::new(domain);
        for e in elems {
            s.insert(e);
        }
        s
    }

    pub fn singleton(domain: usize, e: usize) -> Self {
        BitSet::from_elems(domain, [e])
    }

    #[inline]
    pub fn domain(&self) -> usize {
        self.domain
    }

    #[inline]
    pub fn contains(&self, e: usize) -> bool {
        e < self.domain && self.words[e / WORD] >> (e % WORD) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, e: usize) -> bool {
        assert!(e < self.domain, "element {e} outside domain {}", self.domain);
        let was = self.contains(e);
        self.words[e / WORD] |= 1 << (e % WORD);
        !was
    }

    #[inline]
    pub fn remove(&mut self, e: usize) -> bool {
        let was = self.contains(e);
        if was {
            self.words[e / WORD] &= !(1 << (e % WORD));
        }
        was
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.domain
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        debug_assert_eq!(self.domain, other.domain);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> BitSet {
        BitSet::full(self.domain).difference(self)
    }

    /// Least member, if any.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            word: 0,
            bits: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter<'a> {
    set: &'a BitSet,
    word: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.bits != 0 {
                let tz = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(self.word * WORD + tz);
            }
            self.word += 1;
            if self.word >= self.set.words.len() {
                return None;
            }
            self.bits = self.set.words[self.word];
        }
    }
}

impl<'a> IntoIterator for &'a BitSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then(self.domain.cmp(&other.domain))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for BitSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_complement() {
        for n in [0, 1, 63, 64, 65, 130] {
            let f = BitSet::full(n);
            assert_eq!(f.len(), n);
            assert!(f.complement().is_empty());
            assert!(f.is_full());
        }
    }

    #[test]
    fn subset_lexicographic_order() {
        let a = BitSet::from_elems(3, [0]);
        let b = BitSet::from_elems(3, [0, 1]);
        let c = BitSet::from_elems(3, [1]);
        assert!(a < b && b < c);
        assert!(BitSet::new(3) < a);
    }

    proptest! {
        #[test]
        fn iter_matches_contains(elems in proptest::collection::vec(0usize..200, 0..40)) {
            let s = BitSet::from_elems(200, elems.iter().copied());
            let mut sorted = elems.clone();
            sorted.sort_unstable();
            sorted.dedup();
            prop_assert_eq!(s.to_vec(), sorted.clone());
            prop_assert_eq!(s.len(), sorted.len());
            prop_assert_eq!(s.first(), sorted.first().copied());
        }

        #[test]
        fn set_algebra_laws(xs in proptest::collection::vec(0usize..100, 0..30),
                            ys in proptest::collection::vec(0usize..100, 0..30)) {
            let a = BitSet::from_elems(100, xs);
            let b = BitSet::from_elems(100, ys);
            prop_assert!(a.intersection(&b).is_subset(&a));
            prop_assert!(a.is_subset(&a.union(&b)));
            prop_assert_eq!(a.difference(&b).union(&a.intersection(&b)), a.clone());
            prop_assert!(a.difference(&b).is_disjoint(&b));
        }
    }
}
