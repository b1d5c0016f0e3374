//! Fixed-width bit vectors backing set contents and dominance matrices.

use std::fmt;

pub(crate) const WORD_BITS: usize = 64;

pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD_BITS)
}

/// Contents of one member set, stored as a fixed-width bit vector over the
/// dense element universe of its family. All sets of a family share the same
/// width, so word-wise comparisons need no bounds bookkeeping.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MemberSet {
    words: Box<[u64]>,
}

impl MemberSet {
    pub fn empty(universe_size: usize) -> Self {
        MemberSet {
            words: vec![0u64; words_for(universe_size)].into_boxed_slice(),
        }
    }

    pub fn insert(&mut self, element: usize) {
        self.words[element / WORD_BITS] |= 1u64 << (element % WORD_BITS);
    }

    pub fn contains(&self, element: usize) -> bool {
        match self.words.get(element / WORD_BITS) {
            Some(w) => w & (1u64 << (element % WORD_BITS)) != 0,
            None => false,
        }
    }

    /// Number of elements.
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset_of(&self, other: &MemberSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_strict_subset_of(&self, other: &MemberSet) -> bool {
        self.is_subset_of(other) && self != other
    }

    /// Subset relation in both directions with a single pass:
    /// returns `(self ⊆ other, other ⊆ self)`.
    pub fn subset_relation(&self, other: &MemberSet) -> (bool, bool) {
        let mut fwd = true;
        let mut bwd = true;
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            fwd &= a & !b == 0;
            bwd &= b & !a == 0;
            if !fwd && !bwd {
                break;
            }
        }
        (fwd, bwd)
    }

    pub fn union_into(&self, other: &MemberSet, out: &mut MemberSet) {
        debug_assert_eq!(self.words.len(), out.words.len());
        for ((a, b), o) in self
            .words
            .iter()
            .zip(other.words.iter())
            .zip(out.words.iter_mut())
        {
            *o = a | b;
        }
    }

    pub fn union(&self, other: &MemberSet) -> MemberSet {
        let mut out = self.clone();
        for (o, b) in out.words.iter_mut().zip(other.words.iter()) {
            *o |= b;
        }
        out
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        iter_word_ones(&self.words)
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for MemberSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}

pub(crate) fn iter_word_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rem = w;
        std::iter::from_fn(move || {
            if rem == 0 {
                None
            } else {
                let bit = rem.trailing_zeros() as usize;
                rem &= rem - 1;
                Some(wi * WORD_BITS + bit)
            }
        })
    })
}

/// Dense square boolean matrix with rows packed into words, used for strict
/// dominance relations. Rows can be combined word-wise against element masks.
#[derive(Clone)]
pub(crate) struct BitMatrix {
    n: usize,
    row_words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let row_words = words_for(n);
        BitMatrix {
            n,
            row_words,
            bits: vec![0u64; n * row_words],
        }
    }

    pub fn set(&mut self, r: usize, c: usize) {
        debug_assert!(r < self.n && c < self.n);
        self.bits[r * self.row_words + c / WORD_BITS] |= 1u64 << (c % WORD_BITS);
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.row_words + c / WORD_BITS] & (1u64 << (c % WORD_BITS)) != 0
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.bits[r * self.row_words..(r + 1) * self.row_words]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.bits[r * self.row_words..(r + 1) * self.row_words]
    }

    pub fn row_popcount(&self, r: usize) -> usize {
        self.row(r).iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Plain bit mask over `n` positions, used for level/block membership.
#[derive(Clone)]
pub(crate) struct Mask {
    words: Vec<u64>,
}

impl Mask {
    pub fn new(n: usize) -> Self {
        Mask {
            words: vec![0u64; words_for(n)],
        }
    }

    pub fn set(&mut self, i: usize) {
        self.words[i / WORD_BITS] |= 1u64 << (i % WORD_BITS);
    }

    pub fn and_popcount(&self, row: &[u64]) -> usize {
        self.words
            .iter()
            .zip(row.iter())
            .map(|(m, r)| (m & r).count_ones() as usize)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn member_set_basics() {
        let mut a = MemberSet::empty(130);
        a.insert(0);
        a.insert(64);
        a.insert(129);
        assert_eq!(a.len(), 3);
        assert!(a.contains(64));
        assert!(!a.contains(63));
        assert_eq!(a.iter_ones().collect::<Vec<_>>(), vec![0, 64, 129]);
    }

    #[test]
    fn subset_and_union() {
        let mut a = MemberSet::empty(10);
        let mut b = MemberSet::empty(10);
        a.insert(1);
        b.insert(1);
        b.insert(2);
        assert!(a.is_strict_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert_eq!(a.subset_relation(&b), (true, false));
        let mut out = MemberSet::empty(10);
        a.union_into(&b, &mut out);
        assert_eq!(out, b);
    }

    #[test]
    fn zero_width_sets() {
        let a = MemberSet::empty(0);
        let b = MemberSet::empty(0);
        assert!(a.is_subset_of(&b));
        assert!(a.is_empty());
        assert_eq!(a, b);
    }
}
