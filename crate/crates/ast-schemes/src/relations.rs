//! Triples over a vertex set and ternary relations with a dense membership
//! encoding.
//!
//! Vertices are stored 0-based internally; the 1-based labels used by the
//! serialization layer exist only at that boundary. A [`TernaryRelation`] is a
//! bitset over the `n^3` triples of the cube, indexed lexicographically, so
//! membership tests and whole-relation operations on the candidate-scan hot
//! path are word operations.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{CoordPerm, Permutation};

/// An ordered 3-tuple of vertices, 0-based.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Triple {
    pub x: u8,
    pub y: u8,
    pub z: u8,
}

impl Triple {
    pub fn new(x: u8, y: u8, z: u8) -> Self {
        Triple { x, y, z }
    }

    /// Builds a triple from 1-based labels, as used in documents and listings.
    pub fn from_labels(x: usize, y: usize, z: usize, n: usize) -> Result<Self> {
        let check = |label: usize| -> Result<u8> {
            if label == 0 || label > n {
                return Err(Error::LabelOutOfRange { label, n });
            }
            Ok((label - 1) as u8)
        };
        Ok(Triple::new(check(x)?, check(y)?, check(z)?))
    }

    /// 1-based view of the entries.
    pub fn labels(&self) -> (usize, usize, usize) {
        (self.x as usize + 1, self.y as usize + 1, self.z as usize + 1)
    }

    /// Lexicographic index of the triple within the cube over `n` vertices.
    pub fn index(&self, n: usize) -> usize {
        (self.x as usize * n + self.y as usize) * n + self.z as usize
    }

    pub fn from_index(idx: usize, n: usize) -> Self {
        let z = (idx % n) as u8;
        let y = ((idx / n) % n) as u8;
        let x = (idx / (n * n)) as u8;
        Triple::new(x, y, z)
    }

    pub fn get(&self, pos: usize) -> u8 {
        match pos {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn is_all_distinct(&self) -> bool {
        self.x != self.y && self.y != self.z && self.x != self.z
    }

    pub fn in_range(&self, n: usize) -> bool {
        (self.x as usize) < n && (self.y as usize) < n && (self.z as usize) < n
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y, z) = self.labels();
        write!(f, "({x},{y},{z})")
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y, z) = self.labels();
        write!(f, "({x},{y},{z})")
    }
}

/// A subset of the cube `Omega^3`, stored as a bitset over lexicographic
/// triple indices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TernaryRelation {
    n: usize,
    words: Vec<u64>,
}

impl TernaryRelation {
    pub fn empty(n: usize) -> Self {
        let bits = n * n * n;
        TernaryRelation {
            n,
            words: vec![0u64; bits.div_ceil(64)],
        }
    }

    /// The full cube.
    pub fn full(n: usize) -> Self {
        let mut rel = Self::empty(n);
        let bits = n * n * n;
        for w in 0..rel.words.len() {
            rel.words[w] = !0u64;
        }
        let tail = bits % 64;
        if tail != 0 {
            *rel.words.last_mut().unwrap() = (1u64 << tail) - 1;
        }
        rel
    }

    pub fn from_triples<I: IntoIterator<Item = Triple>>(n: usize, triples: I) -> Self {
        let mut rel = Self::empty(n);
        for t in triples {
            rel.insert(t);
        }
        rel
    }

    pub(crate) fn from_words(n: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), (n * n * n).div_ceil(64));
        TernaryRelation { n, words }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn insert(&mut self, t: Triple) {
        debug_assert!(t.in_range(self.n));
        let idx = t.index(self.n);
        self.words[idx / 64] |= 1u64 << (idx % 64);
    }

    pub fn contains(&self, t: Triple) -> bool {
        if !t.in_range(self.n) {
            return false;
        }
        self.contains_index(t.index(self.n))
    }

    pub fn contains_index(&self, idx: usize) -> bool {
        self.words[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    /// Least member in lexicographic order, if any.
    pub fn min_triple(&self) -> Option<Triple> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                let idx = w * 64 + word.trailing_zeros() as usize;
                return Some(Triple::from_index(idx, self.n));
            }
        }
        None
    }

    /// Iterates members in ascending (lexicographic) order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        let n = self.n;
        self.words.iter().enumerate().flat_map(move |(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(Triple::from_index(w * 64 + b, n))
            })
        })
    }

    /// Image under vertex relabeling: `{(p(x), p(y), p(z))}`.
    pub fn relabeled(&self, p: &Permutation) -> Self {
        debug_assert_eq!(p.degree(), self.n);
        let mut out = Self::empty(self.n);
        for t in self.iter() {
            out.insert(p.relabel_triple(t));
        }
        out
    }

    /// Image under a coordinate permutation.
    pub fn coord_permuted(&self, c: CoordPerm) -> Self {
        let mut out = Self::empty(self.n);
        for t in self.iter() {
            out.insert(c.apply(t));
        }
        out
    }
}

impl fmt::Debug for TernaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, t) in self.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{t:?}")?;
        }
        write!(f, "}}")
    }
}

fn check_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::VertexCountTooSmall(n));
    }
    if n > crate::MAX_VERTICES {
        return Err(Error::VertexCountTooLarge(n));
    }
    Ok(())
}

/// The four trivial relations `R0..R3` present in every scheme:
/// the diagonal and the three two-coordinates-equal patterns.
pub fn trivial_relations(n: usize) -> Result<[TernaryRelation; 4]> {
    check_n(n)?;
    let mut r0 = TernaryRelation::empty(n);
    let mut r1 = TernaryRelation::empty(n);
    let mut r2 = TernaryRelation::empty(n);
    let mut r3 = TernaryRelation::empty(n);
    for x in 0..n as u8 {
        r0.insert(Triple::new(x, x, x));
        for y in 0..n as u8 {
            if x != y {
                r1.insert(Triple::new(y, x, x));
                r2.insert(Triple::new(x, y, x));
                r3.insert(Triple::new(x, x, y));
            }
        }
    }
    Ok([r0, r1, r2, r3])
}

/// All triples with pairwise-distinct coordinates; the complement of the
/// trivial relations. Size `n(n-1)(n-2)`.
pub fn nontrivial_domain(n: usize) -> Result<TernaryRelation> {
    check_n(n)?;
    let mut rel = TernaryRelation::empty(n);
    for idx in 0..n * n * n {
        let t = Triple::from_index(idx, n);
        if t.is_all_distinct() {
            rel.insert(t);
        }
    }
    Ok(rel)
}
