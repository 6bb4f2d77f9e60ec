//! Finite permutation groups on `{1..n}`, the two actions they induce on
//! triples, and orbit computation.
//!
//! Two distinct action kinds live on the same [`Triple`] type: vertex
//! relabeling (the isomorphism action) and coordinate permutation (the
//! closure axiom's action). They are easy to confuse, so the kind is always
//! an explicit parameter and never inferred.

use std::collections::HashSet;
use std::fmt;

use crate::candidate::AstCandidate;
use crate::error::{Error, Result};
use crate::relations::{TernaryRelation, Triple};

/// A permutation of `{1..n}`, stored as a 0-based image vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Permutation {
    image: Vec<u8>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n as u8).collect(),
        }
    }

    /// Validates that `image` is a bijection.
    pub fn from_image(image: Vec<u8>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if (v as usize) >= n || seen[v as usize] {
                return Err(Error::NotABijection(image.clone(), n));
            }
            seen[v as usize] = true;
        }
        Ok(Permutation { image })
    }

    /// Builds a permutation of degree `n` from disjoint cycles of 1-based
    /// labels, e.g. `[[1,2,3]]` for the 3-cycle fixing everything else.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut image: Vec<u8> = (0..n as u8).collect();
        let mut moved = vec![false; n];
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w];
                let to = cycle[(w + 1) % cycle.len()];
                if from == 0 || from > n {
                    return Err(Error::LabelOutOfRange { label: from, n });
                }
                if to == 0 || to > n {
                    return Err(Error::LabelOutOfRange { label: to, n });
                }
                if moved[from - 1] {
                    return Err(Error::NotABijection(image, n));
                }
                moved[from - 1] = true;
                image[from - 1] = (to - 1) as u8;
            }
        }
        Permutation::from_image(image)
    }

    /// Parses cycle notation with 1-based labels, e.g. `"(1,2,3)(4,5)"`.
    pub fn parse_cycles(n: usize, text: &str) -> Result<Self> {
        let bad = |reason: &str| Error::InvalidGroupSpec {
            spec: text.to_string(),
            reason: reason.to_string(),
        };
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(bad("empty cycle notation"));
        }
        let mut cycles = Vec::new();
        let mut rest = trimmed;
        while !rest.is_empty() {
            let Some(stripped) = rest.strip_prefix('(') else {
                return Err(bad("expected `(`"));
            };
            let Some(close) = stripped.find(')') else {
                return Err(bad("unclosed cycle"));
            };
            let body = &stripped[..close];
            let mut cycle = Vec::new();
            for part in body.split(',') {
                let label: usize = part
                    .trim()
                    .parse()
                    .map_err(|_| bad("cycle entries must be integers"))?;
                cycle.push(label);
            }
            cycles.push(cycle);
            rest = &stripped[close + 1..];
        }
        Permutation::from_cycles(n, &cycles)
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, v: u8) -> u8 {
        self.image[v as usize]
    }

    /// Applies the relabeling action to a triple: `(p(x), p(y), p(z))`.
    pub fn relabel_triple(&self, t: Triple) -> Triple {
        Triple::new(self.apply(t.x), self.apply(t.y), self.apply(t.z))
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            image: other.image.iter().map(|&v| self.apply(v)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        let mut image = vec![0u8; self.image.len()];
        for (v, &w) in self.image.iter().enumerate() {
            image[w as usize] = v as u8;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v as usize)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "id");
        }
        let mut seen = vec![false; self.degree()];
        for start in 0..self.degree() {
            if seen[start] || self.image[start] as usize == start {
                continue;
            }
            write!(f, "(")?;
            let mut v = start;
            let mut first = true;
            loop {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "{}", v + 1)?;
                seen[v] = true;
                v = self.image[v] as usize;
                if v == start {
                    break;
                }
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// All permutations of degree `n` in lexicographic image order.
pub fn all_permutations(n: usize) -> Vec<Permutation> {
    let mut image: Vec<u8> = (0..n as u8).collect();
    let mut out = Vec::new();
    loop {
        out.push(Permutation {
            image: image.clone(),
        });
        // next_permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| image[i] < image[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| image[j] > image[i]).unwrap();
        image.swap(i, j);
        image[i + 1..].reverse();
    }
    out
}

fn factorial_saturating(n: usize) -> u64 {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).unwrap_or(u64::MAX)
}

/// A finite permutation group on `{1..n}`: generators plus the fully
/// enumerated element list. Element enumeration is closure under composition,
/// which is cheap at the orders this crate targets.
#[derive(Clone, PartialEq, Eq)]
pub struct PermGroup {
    n: usize,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl PermGroup {
    /// Generates the group, enumerating all elements. The enumeration is
    /// rejected once it exceeds `n!`; use [`PermGroup::from_generators_capped`]
    /// to pick a different cap.
    pub fn from_generators(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        Self::from_generators_capped(n, generators, factorial_saturating(n))
    }

    pub fn from_generators_capped(
        n: usize,
        generators: Vec<Permutation>,
        cap: u64,
    ) -> Result<Self> {
        for g in &generators {
            if g.degree() != n {
                return Err(Error::DegreeMismatch {
                    expected: n,
                    found: g.degree(),
                });
            }
        }
        let mut seen: HashSet<Permutation> = HashSet::new();
        let mut queue = vec![Permutation::identity(n)];
        seen.insert(Permutation::identity(n));
        while let Some(p) = queue.pop() {
            for g in &generators {
                let q = g.compose(&p);
                if !seen.contains(&q) {
                    if seen.len() as u64 >= cap {
                        return Err(Error::GroupOrderCap { cap });
                    }
                    seen.insert(q.clone());
                    queue.push(q);
                }
            }
        }
        let mut elements: Vec<Permutation> = seen.into_iter().collect();
        elements.sort();
        Ok(PermGroup {
            n,
            generators,
            elements,
        })
    }

    pub fn trivial(n: usize) -> Self {
        PermGroup {
            n,
            generators: Vec::new(),
            elements: vec![Permutation::identity(n)],
        }
    }

    /// The full symmetric group on `{1..n}`.
    pub fn symmetric(n: usize) -> Self {
        let mut generators = Vec::new();
        if n >= 2 {
            generators.push(Permutation::from_cycles(n, &[vec![1, 2]]).unwrap());
        }
        if n >= 3 {
            generators.push(Permutation::from_cycles(n, &[(1..=n).collect()]).unwrap());
        }
        PermGroup {
            n,
            generators,
            elements: all_permutations(n),
        }
    }

    /// The cyclic group generated by one n-cycle given as 1-based labels.
    pub fn cyclic(n: usize, cycle: &[usize]) -> Result<Self> {
        Self::from_generators(n, vec![Permutation::from_cycles(n, &[cycle.to_vec()])?])
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.elements.binary_search(p).is_ok()
    }
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(n={}, order={})", self.n, self.order())
    }
}

/// One of the six permutations of the coordinate positions of a triple.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CoordPerm {
    Id,
    Swap12,
    Swap13,
    Swap23,
    Cycle123,
    Cycle132,
}

impl CoordPerm {
    pub const ALL: [CoordPerm; 6] = [
        CoordPerm::Id,
        CoordPerm::Swap12,
        CoordPerm::Swap13,
        CoordPerm::Swap23,
        CoordPerm::Cycle123,
        CoordPerm::Cycle132,
    ];

    /// `positions()[j]` is the source position feeding output slot `j`:
    /// the image of `(x_1,x_2,x_3)` has `x_{sigma(j)}` in slot `j`.
    pub fn positions(self) -> [usize; 3] {
        match self {
            CoordPerm::Id => [0, 1, 2],
            CoordPerm::Swap12 => [1, 0, 2],
            CoordPerm::Swap13 => [2, 1, 0],
            CoordPerm::Swap23 => [0, 2, 1],
            CoordPerm::Cycle123 => [1, 2, 0],
            CoordPerm::Cycle132 => [2, 0, 1],
        }
    }

    pub fn apply(self, t: Triple) -> Triple {
        let p = self.positions();
        Triple::new(t.get(p[0]), t.get(p[1]), t.get(p[2]))
    }

    pub fn index(self) -> usize {
        match self {
            CoordPerm::Id => 0,
            CoordPerm::Swap12 => 1,
            CoordPerm::Swap13 => 2,
            CoordPerm::Swap23 => 3,
            CoordPerm::Cycle123 => 4,
            CoordPerm::Cycle132 => 5,
        }
    }

    /// Interprets a degree-3 permutation as a coordinate permutation.
    pub fn from_perm(p: &Permutation) -> Result<Self> {
        if p.degree() != 3 {
            return Err(Error::DegreeMismatch {
                expected: 3,
                found: p.degree(),
            });
        }
        let positions = [p.apply(0) as usize, p.apply(1) as usize, p.apply(2) as usize];
        Ok(Self::ALL
            .into_iter()
            .find(|c| c.positions() == positions)
            .expect("every degree-3 permutation is a coordinate permutation"))
    }

    /// `self` followed by `other`, i.e. the coordinate permutation with
    /// `t^(self.then(other)) = (t^self)^other`.
    pub fn then(self, other: CoordPerm) -> CoordPerm {
        let a = self.positions();
        let b = other.positions();
        let composed = [a[b[0]], a[b[1]], a[b[2]]];
        Self::ALL
            .into_iter()
            .find(|c| c.positions() == composed)
            .unwrap()
    }
}

impl fmt::Display for CoordPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            CoordPerm::Id => "id",
            CoordPerm::Swap12 => "(1 2)",
            CoordPerm::Swap13 => "(1 3)",
            CoordPerm::Swap23 => "(2 3)",
            CoordPerm::Cycle123 => "(1 2 3)",
            CoordPerm::Cycle132 => "(1 3 2)",
        };
        write!(f, "{s}")
    }
}

/// Which action a group uses on triples.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum ActionKind {
    /// Vertex relabeling: `(x,y,z) -> (p(x), p(y), p(z))`.
    Relabel,
    /// Coordinate permutation; the group must have degree 3.
    CoordPermute,
}

/// A permutation group together with the action it uses on triples.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: PermGroup,
    kind: ActionKind,
}

impl GroupAction {
    pub fn relabel(group: PermGroup) -> Self {
        GroupAction {
            group,
            kind: ActionKind::Relabel,
        }
    }

    /// Coordinate-permutation action of a degree-3 group.
    pub fn coordinate(group: PermGroup) -> Result<Self> {
        if group.degree() != 3 {
            return Err(Error::DegreeMismatch {
                expected: 3,
                found: group.degree(),
            });
        }
        Ok(GroupAction {
            group,
            kind: ActionKind::CoordPermute,
        })
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn kind(&self) -> ActionKind {
        self.kind
    }

    fn apply(&self, element: &Permutation, t: Triple) -> Triple {
        match self.kind {
            ActionKind::Relabel => element.relabel_triple(t),
            ActionKind::CoordPermute => CoordPerm::from_perm(element).unwrap().apply(t),
        }
    }
}

/// Orbit partition of `domain` under the action. Orbits are computed by
/// breadth-first closure from the least unvisited domain element, so each
/// orbit is internally sorted and the orbit list is sorted by least element;
/// the output is deterministic.
///
/// Fails if the action maps a domain point outside the domain.
pub fn orbits(action: &GroupAction, domain: &TernaryRelation) -> Result<Vec<TernaryRelation>> {
    let n = domain.n();
    if action.kind() == ActionKind::Relabel && action.group().degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: action.group().degree(),
        });
    }
    let seeds: Vec<Triple> = domain.iter().collect();
    let mut visited = TernaryRelation::empty(n);
    let mut out = Vec::new();
    for &start in &seeds {
        if visited.contains(start) {
            continue;
        }
        let mut orbit = TernaryRelation::empty(n);
        let mut frontier = vec![start];
        orbit.insert(start);
        visited.insert(start);
        while let Some(t) = frontier.pop() {
            for element in action.group().elements() {
                let image = action.apply(element, t);
                if !domain.contains(image) {
                    return Err(Error::OrbitEscapesDomain {
                        point: t,
                        image,
                    });
                }
                if !orbit.contains(image) {
                    orbit.insert(image);
                    visited.insert(image);
                    frontier.push(image);
                }
            }
        }
        out.push(orbit);
    }
    Ok(out)
}

/// The isomorphism action on candidate partitions: relabels every relation
/// and restores the canonical block order. Trivial relations are setwise
/// fixed, so they stay in place.
pub fn act_on_partition(p: &Permutation, x: &AstCandidate) -> AstCandidate {
    x.relabeled(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relations::nontrivial_domain;
    use proptest::prelude::*;

    #[test]
    fn empty_generating_set_gives_trivial_group() {
        let g = PermGroup::from_generators(3, vec![]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(g.elements()[0].is_identity());
    }

    #[test]
    fn cyclic_groups_have_expected_order() {
        let c4 = PermGroup::cyclic(4, &[1, 2, 3, 4]).unwrap();
        assert_eq!(c4.order(), 4);
        let c5 = PermGroup::cyclic(5, &[1, 2, 3, 4, 5]).unwrap();
        assert_eq!(c5.order(), 5);
        let s3 = PermGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
    }

    #[test]
    fn group_order_divides_n_factorial() {
        let factorial = |n: usize| -> usize { (1..=n).product() };
        for group in [
            PermGroup::trivial(4),
            PermGroup::cyclic(4, &[1, 2, 3, 4]).unwrap(),
            PermGroup::symmetric(5),
            PermGroup::from_generators(
                5,
                vec![
                    Permutation::parse_cycles(5, "(1,2,3,4,5)").unwrap(),
                    Permutation::parse_cycles(5, "(1,2,4,3)").unwrap(),
                ],
            )
            .unwrap(),
            PermGroup::from_generators(6, vec![Permutation::parse_cycles(6, "(1,2)(3,4,5)").unwrap()])
                .unwrap(),
        ] {
            assert_eq!(factorial(group.degree()) % group.order(), 0, "{group:?}");
            for g in group.generators() {
                assert!(group.contains(g));
            }
            assert!(group.contains(&Permutation::identity(group.degree())));
        }
    }

    #[test]
    fn affine_group_of_gf5_has_order_20() {
        let g = PermGroup::from_generators(
            5,
            vec![
                Permutation::parse_cycles(5, "(1,2,3,4,5)").unwrap(),
                Permutation::parse_cycles(5, "(1,2,4,3)").unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(g.order(), 20);
    }

    #[test]
    fn rejects_bad_generators() {
        assert!(Permutation::from_image(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![1, 4]]).is_err());
        // closure of S4 under a cap of 10 must bail out
        let gens = vec![
            Permutation::parse_cycles(4, "(1,2)").unwrap(),
            Permutation::parse_cycles(4, "(1,2,3,4)").unwrap(),
        ];
        assert!(matches!(
            PermGroup::from_generators_capped(4, gens, 10),
            Err(Error::GroupOrderCap { cap: 10 })
        ));
    }

    #[test]
    fn relabel_triple_examples() {
        let id = Permutation::identity(3);
        assert_eq!(id.relabel_triple(Triple::new(0, 1, 2)), Triple::new(0, 1, 2));
        let four_cycle = Permutation::parse_cycles(4, "(1,2,3,4)").unwrap();
        assert_eq!(
            four_cycle.relabel_triple(Triple::from_labels(1, 2, 3, 4).unwrap()),
            Triple::from_labels(2, 3, 4, 4).unwrap()
        );
        let three_cycle = Permutation::parse_cycles(3, "(1,2,3)").unwrap();
        assert_eq!(
            three_cycle.relabel_triple(Triple::from_labels(1, 1, 2, 3).unwrap()),
            Triple::from_labels(2, 2, 3, 3).unwrap()
        );
    }

    #[test]
    fn coord_permute_examples() {
        let t = Triple::from_labels(1, 2, 3, 3).unwrap();
        assert_eq!(CoordPerm::Id.apply(t), t);
        assert_eq!(
            CoordPerm::Swap12.apply(t),
            Triple::from_labels(2, 1, 3, 3).unwrap()
        );
        let u = Triple::from_labels(1, 1, 2, 3).unwrap();
        assert_eq!(
            CoordPerm::Cycle123.apply(u),
            Triple::from_labels(1, 2, 1, 3).unwrap()
        );
    }

    #[test]
    fn coord_perm_composition_table() {
        // spot checks of the `then` convention
        let t = Triple::new(0, 1, 2);
        for a in CoordPerm::ALL {
            for b in CoordPerm::ALL {
                assert_eq!(a.then(b).apply(t), b.apply(a.apply(t)));
            }
        }
    }

    #[test]
    fn trivial_group_orbits_are_singletons() {
        let domain = nontrivial_domain(3).unwrap();
        let action = GroupAction::relabel(PermGroup::trivial(3));
        let os = orbits(&action, &domain).unwrap();
        assert_eq!(os.len(), 6);
        assert!(os.iter().all(|o| o.len() == 1));
    }

    /// Independent orbit closure used to freeze orbit counts: repeatedly
    /// applies raw triple images until nothing changes.
    fn brute_orbits(
        images: &[Box<dyn Fn(Triple) -> Triple>],
        domain: &TernaryRelation,
    ) -> Vec<Vec<Triple>> {
        let mut remaining: Vec<Triple> = domain.iter().collect();
        let mut out = Vec::new();
        while let Some(&seed) = remaining.first() {
            let mut orbit: std::collections::BTreeSet<Triple> = [seed].into();
            loop {
                let mut grew = false;
                let snapshot: Vec<Triple> = orbit.iter().copied().collect();
                for t in snapshot {
                    for f in images {
                        if orbit.insert(f(t)) {
                            grew = true;
                        }
                    }
                }
                if !grew {
                    break;
                }
            }
            remaining.retain(|t| !orbit.contains(t));
            out.push(orbit.into_iter().collect());
        }
        out
    }

    #[test]
    fn coord_s3_orbits_on_n4_distinct_triples() {
        let domain = nontrivial_domain(4).unwrap();
        let action = GroupAction::coordinate(PermGroup::symmetric(3)).unwrap();
        let os = orbits(&action, &domain).unwrap();
        assert_eq!(os.len(), 4);
        assert!(os.iter().all(|o| o.len() == 6));

        let images: Vec<Box<dyn Fn(Triple) -> Triple>> = CoordPerm::ALL
            .into_iter()
            .map(|c| Box::new(move |t| c.apply(t)) as Box<dyn Fn(Triple) -> Triple>)
            .collect();
        let brute = brute_orbits(&images, &domain);
        assert_eq!(brute.len(), 4);
        for (o, b) in os.iter().zip(&brute) {
            assert_eq!(o.iter().collect::<Vec<_>>(), *b);
        }
    }

    #[test]
    fn five_cycle_orbits_on_n5_distinct_triples() {
        let domain = nontrivial_domain(5).unwrap();
        let group = PermGroup::cyclic(5, &[1, 2, 3, 4, 5]).unwrap();
        let action = GroupAction::relabel(group.clone());
        let os = orbits(&action, &domain).unwrap();
        assert_eq!(os.len(), 12);
        assert!(os.iter().all(|o| o.len() == 5));

        let gen = group.generators()[0].clone();
        let images: Vec<Box<dyn Fn(Triple) -> Triple>> =
            vec![Box::new(move |t| gen.relabel_triple(t))];
        assert_eq!(brute_orbits(&images, &domain).len(), 12);
    }

    #[test]
    fn orbits_cover_domain_disjointly() {
        let domain = nontrivial_domain(5).unwrap();
        let action = GroupAction::relabel(PermGroup::cyclic(5, &[1, 3, 5, 2, 4]).unwrap());
        let os = orbits(&action, &domain).unwrap();
        let mut union = TernaryRelation::empty(5);
        for o in &os {
            assert!(union.is_disjoint(o));
            union.union_with(o);
        }
        assert_eq!(union, domain);
    }

    #[test]
    fn orbit_escape_is_reported() {
        // domain not closed: drop one triple from an orbit
        let n = 4;
        let group = PermGroup::cyclic(4, &[1, 2, 3, 4]).unwrap();
        let mut domain = TernaryRelation::empty(n);
        domain.insert(Triple::new(0, 1, 2));
        let action = GroupAction::relabel(group);
        assert!(matches!(
            orbits(&action, &domain),
            Err(Error::OrbitEscapesDomain { .. })
        ));
    }

    #[test]
    fn subgroup_orbits_refine_group_orbits() {
        let domain = nontrivial_domain(4).unwrap();
        let sub = orbits(
            &GroupAction::relabel(PermGroup::cyclic(4, &[1, 2, 3, 4]).unwrap()),
            &domain,
        )
        .unwrap();
        let full = orbits(&GroupAction::relabel(PermGroup::symmetric(4)), &domain).unwrap();
        for small in &sub {
            assert!(
                full.iter()
                    .filter(|big| !big.is_disjoint(small))
                    .all(|big| small.iter().all(|t| big.contains(t)))
            );
        }
    }

    #[test]
    fn orbit_stabilizer_product() {
        for n in 3..=5 {
            let group = PermGroup::symmetric(n);
            let action = GroupAction::relabel(group.clone());
            let domain = nontrivial_domain(n).unwrap();
            for orbit in orbits(&action, &domain).unwrap() {
                let member = orbit.min_triple().unwrap();
                let stab = group
                    .elements()
                    .iter()
                    .filter(|p| p.relabel_triple(member) == member)
                    .count();
                assert_eq!(orbit.len() * stab, group.order());
            }
        }
    }

    proptest! {
        #[test]
        fn compose_then_inverse_is_identity(seed in any::<u64>()) {
            let n = 5usize;
            let mut rng = seed;
            let mut next = || {
                rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                rng
            };
            let mut image: Vec<u8> = (0..n as u8).collect();
            for i in (1..n).rev() {
                let j = (next() % (i as u64 + 1)) as usize;
                image.swap(i, j);
            }
            let p = Permutation::from_image(image).unwrap();
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }
    }
}
