//! Candidate partitions of the cube: the four trivial relations followed by
//! nontrivial blocks in canonical order, plus canonical forms used for
//! isomorphism bookkeeping.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{all_permutations, Permutation};
use crate::relations::{nontrivial_domain, trivial_relations, TernaryRelation, Triple};

/// An ordered partition of `Omega^3`: positions 0..=3 hold the trivial
/// relations, positions >= 4 the nontrivial blocks sorted by least triple.
///
/// A candidate is a well-formed partition; it is not necessarily a valid
/// scheme. The axiom checks decide that separately.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AstCandidate {
    n: usize,
    relations: Vec<TernaryRelation>,
}

impl AstCandidate {
    /// Builds a candidate from its nontrivial blocks, prepending the trivial
    /// relations. Rejects blocks that are empty, overlap, contain a triple
    /// with a repeated coordinate, or fail to cover the nontrivial domain.
    pub fn new(n: usize, nontrivial: Vec<TernaryRelation>) -> Result<Self> {
        let trivial = trivial_relations(n)?;
        let domain = nontrivial_domain(n)?;
        let mut union = TernaryRelation::empty(n);
        for (i, block) in nontrivial.iter().enumerate() {
            if block.n() != n {
                return Err(Error::InvalidPartition(format!(
                    "block {i} is over {} vertices, expected {n}",
                    block.n()
                )));
            }
            if block.is_empty() {
                return Err(Error::InvalidPartition(format!("block {i} is empty")));
            }
            if !union.is_disjoint(block) {
                return Err(Error::InvalidPartition(format!(
                    "block {i} overlaps an earlier block"
                )));
            }
            for t in block.iter() {
                if !t.is_all_distinct() {
                    return Err(Error::InvalidPartition(format!(
                        "block {i} contains {t}, which has a repeated coordinate"
                    )));
                }
            }
            union.union_with(block);
        }
        if union != domain {
            return Err(Error::InvalidPartition(
                "nontrivial blocks do not cover the distinct-triple domain".to_string(),
            ));
        }
        Ok(Self::assemble(n, trivial, nontrivial))
    }

    /// Builds a candidate from a full relation list, trivial prefix included.
    pub fn from_relations(relations: Vec<TernaryRelation>) -> Result<Self> {
        let Some(first) = relations.first() else {
            return Err(Error::InvalidPartition("no relations given".to_string()));
        };
        let n = first.n();
        if relations.len() < 5 {
            return Err(Error::InvalidPartition(format!(
                "a candidate needs at least 5 relations, got {}",
                relations.len()
            )));
        }
        let trivial = trivial_relations(n)?;
        for (i, (got, want)) in relations.iter().zip(trivial.iter()).enumerate() {
            if got != want {
                return Err(Error::InvalidPartition(format!(
                    "relation R{i} does not match the trivial relation R{i}"
                )));
            }
        }
        Self::new(n, relations[4..].to_vec())
    }

    /// Internal constructor for the classification scan: blocks are already
    /// known to partition the domain.
    pub(crate) fn from_nontrivial_unchecked(n: usize, nontrivial: Vec<TernaryRelation>) -> Self {
        let trivial = trivial_relations(n).expect("scan n was validated");
        Self::assemble(n, trivial, nontrivial)
    }

    fn assemble(
        n: usize,
        trivial: [TernaryRelation; 4],
        mut nontrivial: Vec<TernaryRelation>,
    ) -> Self {
        nontrivial.sort_by_key(|b| b.min_triple().expect("blocks are nonempty"));
        let mut relations = Vec::with_capacity(4 + nontrivial.len());
        relations.extend(trivial);
        relations.extend(nontrivial);
        AstCandidate { n, relations }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The order `m`: a candidate with relations `R0..=Rm`.
    pub fn order(&self) -> usize {
        self.relations.len() - 1
    }

    pub fn relations(&self) -> &[TernaryRelation] {
        &self.relations
    }

    pub fn nontrivial(&self) -> &[TernaryRelation] {
        &self.relations[4..]
    }

    /// Index of the relation containing each triple, as a dense `n^3` table.
    pub(crate) fn relation_of_table(&self) -> Vec<u8> {
        let mut table = vec![0u8; self.n * self.n * self.n];
        for (i, rel) in self.relations.iter().enumerate() {
            for t in rel.iter() {
                table[t.index(self.n)] = i as u8;
            }
        }
        table
    }

    /// The isomorphism action: relabels every relation by `p` and restores
    /// the canonical block order. The trivial relations are setwise fixed.
    pub fn relabeled(&self, p: &Permutation) -> Self {
        let nontrivial = self.nontrivial().iter().map(|r| r.relabeled(p)).collect();
        let out = Self::from_nontrivial_unchecked(self.n, nontrivial);
        debug_assert_eq!(out.relations[..4], self.relations[..4]);
        out
    }

    /// A total-order key identifying the candidate as an unordered partition:
    /// the nontrivial blocks as sorted triple-index lists, in canonical block
    /// order. Two candidates get equal keys iff they are equal partitions.
    pub fn canonical_form(&self) -> CanonicalKey {
        CanonicalKey {
            n: self.n,
            blocks: self
                .nontrivial()
                .iter()
                .map(|r| r.iter().map(|t| t.index(self.n) as u32).collect())
                .collect(),
        }
    }

    /// True when every nontrivial relation is invariant under relabeling by
    /// some transitive cyclic subgroup; tested against every n-cycle.
    pub fn is_circulant(&self) -> bool {
        all_permutations(self.n)
            .iter()
            .filter(|p| is_n_cycle(p, self.n))
            .any(|p| {
                self.nontrivial()
                    .iter()
                    .all(|r| &r.relabeled(p) == r)
            })
    }
}

fn is_n_cycle(p: &Permutation, n: usize) -> bool {
    let mut v = 0u8;
    for step in 1..=n {
        v = p.apply(v);
        if v == 0 {
            return step == n;
        }
    }
    false
}

impl fmt::Debug for AstCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "AstCandidate(n={}, order={})", self.n, self.order())?;
        for (i, r) in self.relations.iter().enumerate() {
            writeln!(f, "  R{i}: {r:?}")?;
        }
        Ok(())
    }
}

/// Canonical form of a candidate: nontrivial blocks as ascending triple
/// indices, blocks ordered by least member. Derived `Ord` gives the
/// lexicographic order used everywhere a least form is chosen.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    n: usize,
    blocks: Vec<Vec<u32>>,
}

impl CanonicalKey {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    /// Rebuilds the candidate this form describes.
    pub fn to_candidate(&self) -> AstCandidate {
        let nontrivial = self
            .blocks
            .iter()
            .map(|idxs| {
                TernaryRelation::from_triples(
                    self.n,
                    idxs.iter().map(|&i| Triple::from_index(i as usize, self.n)),
                )
            })
            .collect();
        AstCandidate::from_nontrivial_unchecked(self.n, nontrivial)
    }
}

impl fmt::Debug for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "key[")?;
        for (i, block) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            for (j, idx) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", Triple::from_index(*idx as usize, self.n))?;
            }
        }
        write!(f, "]")
    }
}
