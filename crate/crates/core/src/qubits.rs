//! Compact qubit sets.
//!
//! Every set in the scheduler is a subset of `Q = {0, .., n-1}` with `n <= 64`,
//! so a single machine word holds it and subset tests are one AND.

use std::cmp::Ordering;
use std::fmt;

pub const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct QubitSet(u64);

impl QubitSet {
    pub const EMPTY: QubitSet = QubitSet(0);

    pub fn from_bits(bits: u64) -> Self {
        QubitSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// `{0, .., k-1}`
    pub fn range(k: usize) -> Self {
        QubitSet::span(0, k)
    }

    /// `{lo, .., hi-1}`
    pub fn span(lo: usize, hi: usize) -> Self {
        if hi <= lo {
            return QubitSet::EMPTY;
        }
        let width = hi - lo;
        let mask = if width >= 64 { u64::MAX } else { (1u64 << width) - 1 };
        QubitSet(mask << lo)
    }

    pub fn singleton(q: usize) -> Self {
        QubitSet(1u64 << q)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, q: usize) -> bool {
        q < MAX_QUBITS && self.0 >> q & 1 == 1
    }

    pub fn insert(&mut self, q: usize) {
        self.0 |= 1u64 << q;
    }

    pub fn remove(&mut self, q: usize) {
        self.0 &= !(1u64 << q);
    }

    pub fn is_subset(self, other: QubitSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: QubitSet) -> Self {
        QubitSet(self.0 | other.0)
    }

    pub fn intersection(self, other: QubitSet) -> Self {
        QubitSet(self.0 & other.0)
    }

    pub fn difference(self, other: QubitSet) -> Self {
        QubitSet(self.0 & !other.0)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as usize)
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Ascending iteration.
    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic order of the ascending element lists, so `{0,5} < {1}`
    /// and `{0} < {0,1}`.
    pub fn lex_cmp(self, other: QubitSet) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let d = diff.trailing_zeros();
        let above = if d == 63 { 0 } else { u64::MAX << (d + 1) };
        let (with, without) = if self.0 >> d & 1 == 1 { (self, other) } else { (other, self) };
        // `with` holds d where `without` holds something larger, or ends.
        let with_is_less = without.0 & above != 0;
        let self_is_less = if with == self { with_is_less } else { !with_is_less };
        if self_is_less {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl FromIterator<usize> for QubitSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = QubitSet::EMPTY;
        for q in iter {
            s.insert(q);
        }
        s
    }
}

impl<'a> FromIterator<&'a usize> for QubitSet {
    fn from_iter<I: IntoIterator<Item = &'a usize>>(iter: I) -> Self {
        iter.into_iter().copied().collect()
    }
}

impl fmt::Debug for QubitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl IntoIterator for QubitSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

pub struct Iter(u64);

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let q = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(q)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Iter {}

impl serde::Serialize for QubitSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> serde::Deserialize<'de> for QubitSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<usize> = serde::Deserialize::deserialize(d)?;
        if let Some(&q) = v.iter().find(|&&q| q >= MAX_QUBITS) {
            return Err(serde::de::Error::custom(format!("qubit {q} out of range")));
        }
        Ok(v.into_iter().collect())
    }
}
