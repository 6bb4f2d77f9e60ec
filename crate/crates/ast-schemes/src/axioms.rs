//! The three defining axioms of an association scheme on triples and the
//! numeric invariants they produce: valencies, the intersection tensor, and
//! the coordinate-action table.
//!
//! All counts are exact small integers; no tolerances are involved anywhere.

use std::fmt;

use crate::candidate::AstCandidate;
use crate::perm::CoordPerm;
use crate::relations::Triple;

/// Per-relation valencies: the constant number of third coordinates
/// completing a fixed ordered pair of distinct vertices into each relation.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ValencyVector(pub Vec<u32>);

impl ValencyVector {
    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn sum(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for ValencyVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// The 4-index array of intersection numbers `p[i][j][k][l]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntersectionTensor {
    m: usize,
    counts: Vec<u32>,
}

impl IntersectionTensor {
    fn zero(m: usize) -> Self {
        let d = m + 1;
        IntersectionTensor {
            m,
            counts: vec![0; d * d * d * d],
        }
    }

    fn offset(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        let d = self.m + 1;
        ((i * d + j) * d + k) * d + l
    }

    /// Largest relation index; the tensor covers `0..=m` in every slot.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> u32 {
        self.counts[self.offset(i, j, k, l)]
    }

    /// `sum_{i,j,k} p[i][j][k][l]`; equals the vertex count for a scheme.
    pub fn slice_sum(&self, l: usize) -> u32 {
        let d = self.m + 1;
        (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .flat_map(|(i, j)| (0..d).map(move |k| (i, j, k)))
            .map(|(i, j, k)| self.get(i, j, k, l))
            .sum()
    }

    /// Nonzero cells as `((i, j, k, l), count)` in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = ((usize, usize, usize, usize), u32)> + '_ {
        let d = self.m + 1;
        self.counts.iter().enumerate().filter_map(move |(off, &v)| {
            if v == 0 {
                return None;
            }
            let l = off % d;
            let k = off / d % d;
            let j = off / (d * d) % d;
            let i = off / (d * d * d);
            Some(((i, j, k, l), v))
        })
    }
}

/// For each coordinate permutation, the induced permutation of relation
/// indices: `rows[sigma][i] = j` with `R_i^sigma = R_j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoordActionTable {
    rows: [Vec<u8>; 6],
}

impl CoordActionTable {
    pub fn get(&self, c: CoordPerm, i: usize) -> usize {
        self.rows[c.index()][i] as usize
    }

    pub fn row(&self, c: CoordPerm) -> &[u8] {
        &self.rows[c.index()]
    }
}

/// Structured failure of a single axiom check, carrying a witness.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum CheckFailure {
    /// Two ordered pairs complete into `relation` a different number of ways.
    Valency {
        relation: usize,
        pair_a: (u8, u8),
        count_a: u32,
        pair_b: (u8, u8),
        count_b: u32,
    },
    /// The image of `relation` under `perm` is not a relation of the
    /// partition.
    CoordClosure { relation: usize, perm: CoordPerm },
    /// Two base triples of `R_l` see different counts in cell `(i,j,k)`.
    Regularity {
        i: usize,
        j: usize,
        k: usize,
        l: usize,
        base_a: Triple,
        count_a: u32,
        base_b: Triple,
        count_b: u32,
    },
}

impl fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckFailure::Valency {
                relation,
                pair_a,
                count_a,
                pair_b,
                count_b,
            } => write!(
                f,
                "valency: R{relation} completes pair ({},{}) {count_a} way(s) but pair ({},{}) {count_b} way(s)",
                pair_a.0 + 1,
                pair_a.1 + 1,
                pair_b.0 + 1,
                pair_b.1 + 1,
            ),
            CheckFailure::CoordClosure { relation, perm } => write!(
                f,
                "coordinate closure: the image of R{relation} under {perm} is not a relation"
            ),
            CheckFailure::Regularity {
                i,
                j,
                k,
                l,
                base_a,
                count_a,
                base_b,
                count_b,
            } => write!(
                f,
                "regularity: cell p[{i}][{j}][{k}]^{l} counts {count_a} at {base_a} but {count_b} at {base_b}"
            ),
        }
    }
}

impl CheckFailure {
    /// The axiom this failure belongs to, by condition number 1..=3.
    pub fn condition(&self) -> usize {
        match self {
            CheckFailure::Valency { .. } => 1,
            CheckFailure::Regularity { .. } => 2,
            CheckFailure::CoordClosure { .. } => 3,
        }
    }
}

/// Which axiom checks `validate_ast_with` runs. Disabling checks exists for
/// harness-sanity tests; every production path uses the default.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct EnabledChecks {
    pub valency: bool,
    pub closure: bool,
    pub regularity: bool,
}

impl Default for EnabledChecks {
    fn default() -> Self {
        EnabledChecks {
            valency: true,
            closure: true,
            regularity: true,
        }
    }
}

/// Outcome of validating a candidate: the first failed condition if any,
/// and each invariant exactly when its condition passed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AstReport {
    pub failure: Option<CheckFailure>,
    pub valencies: Option<ValencyVector>,
    pub coord_table: Option<CoordActionTable>,
    pub tensor: Option<IntersectionTensor>,
}

impl AstReport {
    pub fn is_ast(&self) -> bool {
        self.failure.is_none()
    }
}

/// Condition 1: for every relation, the number of third coordinates
/// completing an ordered pair of distinct vertices is constant.
pub fn check_valency(x: &AstCandidate) -> Result<ValencyVector, CheckFailure> {
    let n = x.n() as u8;
    let mut counts = Vec::with_capacity(x.order() + 1);
    for (rel_idx, rel) in x.relations().iter().enumerate() {
        let mut reference: Option<((u8, u8), u32)> = None;
        for a in 0..n {
            for b in 0..n {
                if a == b {
                    continue;
                }
                let count = (0..n).filter(|&z| rel.contains(Triple::new(a, b, z))).count() as u32;
                match reference {
                    None => reference = Some(((a, b), count)),
                    Some((pair_a, count_a)) => {
                        if count != count_a {
                            return Err(CheckFailure::Valency {
                                relation: rel_idx,
                                pair_a,
                                count_a,
                                pair_b: (a, b),
                                count_b: count,
                            });
                        }
                    }
                }
            }
        }
        counts.push(reference.expect("n >= 3 gives at least one distinct pair").1);
    }
    Ok(ValencyVector(counts))
}

/// Condition 3: the image of every relation under each of the six coordinate
/// permutations is again a relation of the partition.
pub fn check_coordinate_closure(x: &AstCandidate) -> Result<CoordActionTable, CheckFailure> {
    let mut rows: [Vec<u8>; 6] = Default::default();
    for perm in CoordPerm::ALL {
        let row = &mut rows[perm.index()];
        for (i, rel) in x.relations().iter().enumerate() {
            let image = rel.coord_permuted(perm);
            match x.relations().iter().position(|r| *r == image) {
                Some(j) => row.push(j as u8),
                None => return Err(CheckFailure::CoordClosure { relation: i, perm }),
            }
        }
        debug_assert!({
            let mut sorted = row.clone();
            sorted.sort_unstable();
            sorted.iter().enumerate().all(|(i, &j)| i == j as usize)
        });
    }
    Ok(CoordActionTable { rows })
}

/// Condition 2: for every base relation `R_l`, the distribution of witnesses
/// `w` over cells `(i,j,k)` — where replacing the first, second or third
/// coordinate of the base triple by `w` lands in `R_i`, `R_j`, `R_k` — is the
/// same for every base triple.
///
/// Walks each base triple once and bins its `n` witnesses, which is
/// equivalent to the quadruple loop over `(i,j,k,l)` but far cheaper.
pub fn check_regularity(x: &AstCandidate) -> Result<IntersectionTensor, CheckFailure> {
    let n = x.n();
    let rel_of = x.relation_of_table();
    let m = x.order();
    let cell = |t: Triple, w: u8| -> (u8, u8, u8) {
        let i = rel_of[Triple::new(w, t.y, t.z).index(n)];
        let j = rel_of[Triple::new(t.x, w, t.z).index(n)];
        let k = rel_of[Triple::new(t.x, t.y, w).index(n)];
        (i, j, k)
    };
    let distribution = |t: Triple| -> Vec<((u8, u8, u8), u32)> {
        let mut hist: Vec<((u8, u8, u8), u32)> = Vec::with_capacity(n);
        for w in 0..n as u8 {
            let c = cell(t, w);
            match hist.iter_mut().find(|(key, _)| *key == c) {
                Some((_, count)) => *count += 1,
                None => hist.push((c, 1)),
            }
        }
        hist.sort_unstable();
        hist
    };

    let mut tensor = IntersectionTensor::zero(m);
    for (l, rel) in x.relations().iter().enumerate() {
        let mut triples = rel.iter();
        let base_a = triples.next().expect("relations are nonempty");
        let reference = distribution(base_a);
        for base_b in triples {
            let got = distribution(base_b);
            if got != reference {
                let ((i, j, k), count_a, count_b) = first_difference(&reference, &got);
                return Err(CheckFailure::Regularity {
                    i: i as usize,
                    j: j as usize,
                    k: k as usize,
                    l,
                    base_a,
                    count_a,
                    base_b,
                    count_b,
                });
            }
        }
        for ((i, j, k), count) in reference {
            let off = tensor.offset(i as usize, j as usize, k as usize, l);
            tensor.counts[off] = count;
        }
    }
    Ok(tensor)
}

fn first_difference(
    a: &[((u8, u8, u8), u32)],
    b: &[((u8, u8, u8), u32)],
) -> ((u8, u8, u8), u32, u32) {
    let lookup = |hist: &[((u8, u8, u8), u32)], key: (u8, u8, u8)| -> u32 {
        hist.iter().find(|(k, _)| *k == key).map_or(0, |(_, c)| *c)
    };
    for (key, count) in a {
        let other = lookup(b, *key);
        if other != *count {
            return (*key, *count, other);
        }
    }
    for (key, count) in b {
        let other = lookup(a, *key);
        if other != *count {
            return (*key, other, *count);
        }
    }
    unreachable!("distributions compared unequal")
}

/// Runs the axiom checks cheapest-first (valency, coordinate closure,
/// regularity), short-circuiting on the first failure.
pub fn validate_ast(x: &AstCandidate) -> AstReport {
    validate_ast_with(x, EnabledChecks::default())
}

pub fn validate_ast_with(x: &AstCandidate, checks: EnabledChecks) -> AstReport {
    let mut report = AstReport {
        failure: None,
        valencies: None,
        coord_table: None,
        tensor: None,
    };
    if checks.valency {
        match check_valency(x) {
            Ok(v) => report.valencies = Some(v),
            Err(failure) => {
                report.failure = Some(failure);
                return report;
            }
        }
    }
    if checks.closure {
        match check_coordinate_closure(x) {
            Ok(t) => report.coord_table = Some(t),
            Err(failure) => {
                report.failure = Some(failure);
                return report;
            }
        }
    }
    if checks.regularity {
        match check_regularity(x) {
            Ok(t) => report.tensor = Some(t),
            Err(failure) => {
                report.failure = Some(failure);
                return report;
            }
        }
    }
    report
}

/// True when every nontrivial relation is fixed setwise by all six
/// coordinate permutations.
pub fn is_symmetric(x: &AstCandidate, table: &CoordActionTable) -> bool {
    (4..=x.order()).all(|i| CoordPerm::ALL.iter().all(|&c| table.get(c, i) == i))
}

/// Completion counts for the given coordinate slot, per relation: `Some(c)`
/// when replacing that slot completes every ordered pair of distinct
/// vertices a constant `c` ways. Slot 2 is the valency axiom; slots 0 and 1
/// are derived data, not axioms.
pub fn slot_completion_counts(x: &AstCandidate, slot: usize) -> Vec<Option<u32>> {
    assert!(slot < 3);
    let n = x.n() as u8;
    let triple_for = |a: u8, b: u8, w: u8| match slot {
        0 => Triple::new(w, a, b),
        1 => Triple::new(a, w, b),
        _ => Triple::new(a, b, w),
    };
    x.relations()
        .iter()
        .map(|rel| {
            let mut reference = None;
            for a in 0..n {
                for b in 0..n {
                    if a == b {
                        continue;
                    }
                    let count =
                        (0..n).filter(|&w| rel.contains(triple_for(a, b, w))).count() as u32;
                    match reference {
                        None => reference = Some(count),
                        Some(c) if c != count => return None,
                        Some(_) => {}
                    }
                }
            }
            reference
        })
        .collect()
}
