//! Fixed-universe bit sets used for extents, intents and itemsets.

use std::cmp::Ordering;
use std::fmt;

const WORD: usize = 64;

/// A subset of `{0, .., universe-1}` packed into 64-bit words.
///
/// Two sets compare equal only when both the universe size and the members
/// agree. The `Ord` impl compares the sorted member lists lexicographically,
/// which gives a stable presentation order; the lectic orders used by the
/// enumeration algorithms live in [`BitSet::lectic_cmp`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    universe: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn empty(universe: usize) -> Self {
        BitSet {
            universe,
            words: vec![0; universe.div_ceil(WORD)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for w in s.words.iter_mut() {
            *w = !0;
        }
        s.trim();
        s
    }

    /// Builds a set from indices. Panics if an index is outside the universe;
    /// callers validating user input should use [`BitSet::try_from_indices`].
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut s = Self::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    /// Like [`BitSet::from_indices`], returning the first out-of-range index as the error.
    pub fn try_from_indices<I: IntoIterator<Item = usize>>(
        universe: usize,
        indices: I,
    ) -> Result<Self, usize> {
        let mut s = Self::empty(universe);
        for i in indices {
            if i >= universe {
                return Err(i);
            }
            s.insert(i);
        }
        Ok(s)
    }

    /// The set `{0, .., end-1}` within `universe`.
    pub fn prefix(universe: usize, end: usize) -> Self {
        let mut s = Self::empty(universe);
        let end = end.min(universe);
        let full_words = end / WORD;
        for w in s.words.iter_mut().take(full_words) {
            *w = !0;
        }
        if !end.is_multiple_of(WORD) {
            s.words[full_words] = (1u64 << (end % WORD)) - 1;
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] & (1u64 << (i % WORD)) != 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        self.words[i / WORD] |= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        if i < self.universe {
            self.words[i / WORD] &= !(1u64 << (i % WORD));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_proper_subset(&self, other: &BitSet) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn difference(&self, other: &BitSet) -> BitSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> BitSet {
        let mut s = self.clone();
        for w in s.words.iter_mut() {
            *w = !*w;
        }
        s.trim();
        s
    }

    pub fn intersection_len(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn with(&self, i: usize) -> BitSet {
        let mut s = self.clone();
        s.insert(i);
        s
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            word_idx: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn last(&self) -> Option<usize> {
        for (wi, &w) in self.words.iter().enumerate().rev() {
            if w != 0 {
                return Some(wi * WORD + (WORD - 1 - w.leading_zeros() as usize));
            }
        }
        None
    }

    /// True if `self` and `other` contain the same elements below `end`.
    pub fn agrees_below(&self, other: &BitSet, end: usize) -> bool {
        let full_words = end / WORD;
        if self.words[..full_words.min(self.words.len())]
            != other.words[..full_words.min(other.words.len())]
        {
            return false;
        }
        let rem = end % WORD;
        if rem == 0 || full_words >= self.words.len() {
            return true;
        }
        let mask = (1u64 << rem) - 1;
        self.words[full_words] & mask == other.words[full_words] & mask
    }

    /// Lectic comparison: `self < other` iff the smallest element of the
    /// symmetric difference belongs to `other`.
    pub fn lectic_cmp(&self, other: &BitSet) -> Ordering {
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff.trailing_zeros();
                return if b >> bit & 1 == 1 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }

    /// Iterates over all subsets of `self` (including the empty set and `self`).
    /// Intended for small sets; the caller bounds the size.
    pub fn subsets(&self) -> impl Iterator<Item = BitSet> + '_ {
        let members = self.to_vec();
        let n = members.len();
        assert!(n < 64, "subset enumeration over {n} elements");
        (0u64..(1u64 << n)).map(move |mask| {
            let mut s = BitSet::empty(self.universe);
            for (k, &m) in members.iter().enumerate() {
                if mask >> k & 1 == 1 {
                    s.insert(m);
                }
            }
            s
        })
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then(self.universe.cmp(&other.universe))
    }
}

impl fmt::Debug for BitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    word_idx: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word_idx * WORD + bit);
            }
            self.word_idx += 1;
            if self.word_idx >= self.words.len() {
                return None;
            }
            self.current = self.words[self.word_idx];
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
