//! The classification pipeline: orbit computation, streamed candidate
//! enumeration, axiom filtering, isomorphism-class grouping, and transversal
//! extraction; plus the scheme generator for two-transitive group actions.
//!
//! Two pipeline orders exist. The default filters candidates by the axioms
//! before any isomorphism work, because the valency stage eliminates almost
//! everything cheaply. The legacy order groups candidates into isomorphism
//! classes first and validates only a transversal; it exists for differential
//! testing and produces identical class sets.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::axioms::{validate_ast_with, AstReport, EnabledChecks};
use crate::candidate::{AstCandidate, CanonicalKey};
use crate::error::{Error, Result};
use crate::perm::{
    all_permutations, orbits, ActionKind, GroupAction, PermGroup, Permutation,
};
use crate::relations::{nontrivial_domain, TernaryRelation, Triple};
use crate::rgs::OrbitPartitionStream;

/// Largest vertex count the classifier accepts; isomorphism grouping
/// enumerates all of `S_n`.
pub const MAX_CLASSIFY_VERTICES: usize = 9;

const CHUNK: usize = 1 << 15;

/// Which orders a classification job scans.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum OrderSelection {
    /// One order `m >= 4`, i.e. `m - 3` nontrivial blocks.
    Single(usize),
    /// Every feasible order: `m - 3` from 1 to the number of orbits.
    All,
}

#[derive(Copy, Clone, PartialEq, Eq, Debug, Default)]
pub enum PipelineOrder {
    /// Axioms first, isomorphism grouping on survivors.
    #[default]
    AxiomsFirst,
    /// Isomorphism orbits first, axioms on a transversal.
    IsomorphismFirst,
}

/// A classification request: find every scheme on `n` vertices whose
/// nontrivial relations are invariant under the group action.
#[derive(Clone, Debug)]
pub struct ClassificationJob {
    pub n: usize,
    pub action: GroupAction,
    pub orders: OrderSelection,
    pub pipeline: PipelineOrder,
    pub checks: EnabledChecks,
    /// Optional human-readable group description carried into output.
    pub group_label: Option<String>,
}

impl ClassificationJob {
    pub fn new(n: usize, action: GroupAction, orders: OrderSelection) -> Self {
        ClassificationJob {
            n,
            action,
            orders,
            pipeline: PipelineOrder::default(),
            checks: EnabledChecks::default(),
            group_label: None,
        }
    }
}

/// Stage counts for one scanned order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderStats {
    pub order: usize,
    /// Candidates enumerated from the partition stream.
    pub enumerated: u64,
    pub valency_pass: u64,
    pub closure_pass: u64,
    pub regularity_pass: u64,
    /// Distinct isomorphism keys seen before axiom filtering; legacy
    /// pipeline only.
    pub transversal: Option<u64>,
    pub classes: usize,
}

/// One isomorphism class of schemes found by a classification run.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AstClass {
    pub order: usize,
    /// Minimum canonical form over all relabelings; the class identity.
    pub key: CanonicalKey,
    /// The enumerated candidate with the least canonical form in the class;
    /// its nontrivial relations are unions of orbits of the job's group.
    pub representative: AstCandidate,
    /// Number of enumerated candidates in this class.
    pub members_found: u64,
    /// Size of the class under the full relabeling action: `n!` divided by
    /// the stabilizer order of the partition.
    pub orbit_size: u64,
}

#[derive(Clone, Debug)]
pub struct ClassificationResult {
    pub n: usize,
    pub classes: Vec<AstClass>,
    pub per_order: Vec<OrderStats>,
    pub elapsed: Duration,
}

impl ClassificationResult {
    pub fn total_enumerated(&self) -> u64 {
        self.per_order.iter().map(|s| s.enumerated).sum()
    }

    pub fn stats_for_order(&self, m: usize) -> Option<&OrderStats> {
        self.per_order.iter().find(|s| s.order == m)
    }
}

/// Streams the partitions of the orbit list into exactly `k` unordered
/// blocks, in restricted-growth-string order.
pub fn enumerate_orbit_partitions(
    orbit_list: &[TernaryRelation],
    k: usize,
) -> Result<OrbitPartitionStream> {
    OrbitPartitionStream::new(orbit_list.len(), k)
}

/// Assembles a candidate from a partition of the orbit list: the trivial
/// relations followed by each block's union. `blocks` hold orbit indices;
/// every orbit must be used exactly once.
pub fn build_candidate(
    orbit_list: &[TernaryRelation],
    blocks: &[Vec<usize>],
    n: usize,
) -> Result<AstCandidate> {
    let mut used = vec![false; orbit_list.len()];
    let mut nontrivial = Vec::with_capacity(blocks.len());
    for block in blocks {
        let mut union = TernaryRelation::empty(n);
        for &idx in block {
            let orbit = orbit_list.get(idx).ok_or_else(|| {
                Error::InvalidPartition(format!("orbit index {idx} out of range"))
            })?;
            if std::mem::replace(&mut used[idx], true) {
                return Err(Error::InvalidPartition(format!(
                    "orbit {idx} appears in more than one block"
                )));
            }
            union.union_with(orbit);
        }
        nontrivial.push(union);
    }
    if !used.iter().all(|&u| u) {
        return Err(Error::InvalidPartition(
            "blocks do not cover every orbit".to_string(),
        ));
    }
    AstCandidate::new(n, nontrivial)
}

/// The minimum canonical form of the candidate over all `n!` relabelings.
/// Equal keys characterize isomorphic candidates.
pub fn isomorphism_key(x: &AstCandidate) -> CanonicalKey {
    all_permutations(x.n())
        .iter()
        .map(|p| x.relabeled(p).canonical_form())
        .min()
        .expect("at least the identity relabeling exists")
}

/// Order of the stabilizer of `x` (as an unordered partition) inside `S_n`.
pub fn partition_stabilizer_order(x: &AstCandidate) -> u64 {
    let own = x.canonical_form();
    all_permutations(x.n())
        .iter()
        .filter(|p| x.relabeled(p).canonical_form() == own)
        .count() as u64
}

/// Size of the relabeling orbit of `x`: `n! / |stabilizer|`.
pub fn partition_orbit_size(x: &AstCandidate) -> u64 {
    let factorial: u64 = (1..=x.n() as u64).product();
    factorial / partition_stabilizer_order(x)
}

/// One isomorphism class of an explicit candidate list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IsoClass {
    pub key: CanonicalKey,
    /// The member with the least canonical form.
    pub representative: AstCandidate,
    /// Indices into the input list, in input order.
    pub members: Vec<usize>,
}

/// Groups candidates by relabeling orbit. Classes are sorted by key.
pub fn isomorphism_classes(candidates: &[AstCandidate], n: usize) -> Result<Vec<IsoClass>> {
    for c in candidates {
        if c.n() != n {
            return Err(Error::DegreeMismatch {
                expected: n,
                found: c.n(),
            });
        }
    }
    let mut groups: BTreeMap<CanonicalKey, Vec<usize>> = BTreeMap::new();
    for (i, c) in candidates.iter().enumerate() {
        groups.entry(isomorphism_key(c)).or_default().push(i);
    }
    Ok(groups
        .into_iter()
        .map(|(key, members)| {
            let representative = members
                .iter()
                .map(|&i| &candidates[i])
                .min_by_key(|c| c.canonical_form())
                .unwrap()
                .clone();
            IsoClass {
                key,
                representative,
                members,
            }
        })
        .collect())
}

/// Failure modes of [`ast_from_group_orbits`].
#[derive(Debug, Error)]
pub enum GroupAstError {
    #[error(
        "orbits on repeated-coordinate triples form {found} relations instead of the 4 trivial ones; the group is not two-transitive"
    )]
    TrivialPrefixMismatch { found: usize },
    #[error("orbit partition is not a scheme: {failure}")]
    NotAst {
        failure: String,
        report: Box<AstReport>,
    },
    #[error(transparent)]
    Other(#[from] Error),
}

/// Builds the scheme induced by a group's natural action on the cube: one
/// relation per orbit, trivial relations first. Succeeds exactly when the
/// orbits on repeated-coordinate triples are the trivial relations (the
/// group is two-transitive) and the assembled partition passes the axioms.
pub fn ast_from_group_orbits(g: &PermGroup, n: usize) -> std::result::Result<AstCandidate, GroupAstError> {
    if g.degree() != n {
        return Err(Error::DegreeMismatch {
            expected: n,
            found: g.degree(),
        }
        .into());
    }
    if n < 4 {
        return Err(Error::InvalidJob(format!(
            "the orbit construction needs n >= 4, got {n}"
        ))
        .into());
    }
    let action = GroupAction::relabel(g.clone());
    let cube = TernaryRelation::full(n);
    let all_orbits = orbits(&action, &cube)?;
    let trivial = crate::relations::trivial_relations(n)?;
    let (repeated, distinct): (Vec<_>, Vec<_>) = all_orbits
        .into_iter()
        .partition(|o| o.iter().any(|t| !t.is_all_distinct()));
    if repeated.len() != 4 || !trivial.iter().all(|t| repeated.contains(t)) {
        return Err(GroupAstError::TrivialPrefixMismatch {
            found: repeated.len(),
        });
    }
    let candidate = AstCandidate::new(n, distinct)?;
    let report = validate_ast_with(&candidate, EnabledChecks::default());
    match &report.failure {
        None => Ok(candidate),
        Some(failure) => Err(GroupAstError::NotAst {
            failure: failure.to_string(),
            report: Box::new(report),
        }),
    }
}

/// Runs a classification job.
pub fn classify(job: &ClassificationJob) -> Result<ClassificationResult> {
    let start = Instant::now();
    let n = job.n;
    if !(3..=MAX_CLASSIFY_VERTICES).contains(&n) {
        return Err(Error::InvalidJob(format!(
            "classification supports 3..={MAX_CLASSIFY_VERTICES} vertices, got {n}"
        )));
    }
    let domain = nontrivial_domain(n)?;
    let orbit_list = orbits(&job.action, &domain)?;
    let block_counts: Vec<usize> = match job.orders {
        OrderSelection::All => (1..=orbit_list.len()).collect(),
        OrderSelection::Single(m) => {
            if m < 4 || m - 3 > orbit_list.len() {
                return Err(Error::InvalidJob(format!(
                    "order {m} needs between 1 and {} nontrivial relations",
                    orbit_list.len()
                )));
            }
            vec![m - 3]
        }
    };

    let ctx = ScanContext::new(n, &orbit_list, job.checks);
    let mut classes = Vec::new();
    let mut per_order = Vec::new();
    for &k in &block_counts {
        let (mut order_classes, stats) = match job.pipeline {
            PipelineOrder::AxiomsFirst => scan_axioms_first(&ctx, &orbit_list, k)?,
            PipelineOrder::IsomorphismFirst => scan_isomorphism_first(&ctx, &orbit_list, job, k)?,
        };
        classes.append(&mut order_classes);
        per_order.push(stats);
    }
    Ok(ClassificationResult {
        n,
        classes,
        per_order,
        elapsed: start.elapsed(),
    })
}

/// Precomputed per-job scan tables: orbit membership words and packed
/// per-orbit pair-completion counts for the valency pre-filter.
struct ScanContext {
    n: usize,
    rel_words: usize,
    pair_bytes: usize,
    pair_words: usize,
    orbit_count: usize,
    /// orbit_count x rel_words
    orbit_words: Vec<u64>,
    /// orbit_count x pair_words, one byte lane per ordered distinct pair
    orbit_pairs: Vec<u64>,
    checks: EnabledChecks,
}

impl ScanContext {
    fn new(n: usize, orbit_list: &[TernaryRelation], checks: EnabledChecks) -> Self {
        let rel_words = (n * n * n).div_ceil(64);
        let pair_bytes = n * (n - 1);
        let pair_words = pair_bytes.div_ceil(8);
        let mut orbit_words = Vec::with_capacity(orbit_list.len() * rel_words);
        let mut orbit_pairs = vec![0u64; orbit_list.len() * pair_words];
        for (o, orbit) in orbit_list.iter().enumerate() {
            orbit_words.extend_from_slice(orbit.words());
            for t in orbit.iter() {
                let pair = pair_index(t, n);
                orbit_pairs[o * pair_words + pair / 8] += 1u64 << (8 * (pair % 8));
            }
        }
        ScanContext {
            n,
            rel_words,
            pair_bytes,
            pair_words,
            orbit_count: orbit_list.len(),
            orbit_words,
            orbit_pairs,
            checks,
        }
    }

    fn orbit_word_slice(&self, o: usize) -> &[u64] {
        &self.orbit_words[o * self.rel_words..(o + 1) * self.rel_words]
    }
}

fn pair_index(t: Triple, n: usize) -> usize {
    debug_assert!(t.is_all_distinct());
    let x = t.x as usize;
    let y = t.y as usize;
    x * (n - 1) + if y < x { y } else { y - 1 }
}

/// Reusable per-worker buffers for the candidate scan.
struct Scratch {
    pair_acc: Vec<u64>,
    block_words: Vec<u64>,
    relabeled: Vec<u64>,
    form: Vec<u64>,
    best: Vec<u64>,
    order: Vec<usize>,
}

impl Scratch {
    fn new(ctx: &ScanContext, k: usize) -> Self {
        Scratch {
            pair_acc: vec![0; k * ctx.pair_words],
            block_words: vec![0; k * ctx.rel_words],
            relabeled: vec![0; k * ctx.rel_words],
            form: vec![0; k * ctx.rel_words],
            best: vec![0; k * ctx.rel_words],
            order: vec![0; k],
        }
    }
}

/// Valency pre-filter: accumulates each block's pair-completion counts and
/// checks they are constant. Exactly equivalent to condition 1 on the built
/// candidate, because the trivial relations always satisfy it.
fn passes_valency_prefilter(ctx: &ScanContext, scratch: &mut Scratch, assignment: &[u8], k: usize) -> bool {
    let pw = ctx.pair_words;
    scratch.pair_acc[..k * pw].fill(0);
    for (o, &block) in assignment.iter().enumerate() {
        let src = &ctx.orbit_pairs[o * pw..(o + 1) * pw];
        let dst = &mut scratch.pair_acc[block as usize * pw..(block as usize + 1) * pw];
        for (d, s) in dst.iter_mut().zip(src) {
            *d += s;
        }
    }
    let tail_bytes = ctx.pair_bytes % 8;
    let tail_mask = if tail_bytes == 0 {
        !0u64
    } else {
        (1u64 << (8 * tail_bytes)) - 1
    };
    for b in 0..k {
        let acc = &scratch.pair_acc[b * pw..(b + 1) * pw];
        let pattern = (acc[0] & 0xFF).wrapping_mul(0x0101_0101_0101_0101);
        for (w, &word) in acc.iter().enumerate() {
            let mask = if w + 1 == pw { tail_mask } else { !0u64 };
            if (word ^ pattern) & mask != 0 {
                return false;
            }
        }
    }
    true
}

fn build_blocks(ctx: &ScanContext, scratch: &mut Scratch, assignment: &[u8], k: usize) {
    let rw = ctx.rel_words;
    scratch.block_words[..k * rw].fill(0);
    for (o, &block) in assignment.iter().enumerate() {
        let src = ctx.orbit_word_slice(o);
        let dst = &mut scratch.block_words[block as usize * rw..(block as usize + 1) * rw];
        for (d, s) in dst.iter_mut().zip(src) {
            *d |= s;
        }
    }
}

fn candidate_from_blocks(ctx: &ScanContext, blocks: &[u64], k: usize) -> AstCandidate {
    let rw = ctx.rel_words;
    let nontrivial = (0..k)
        .map(|b| TernaryRelation::from_words(ctx.n, blocks[b * rw..(b + 1) * rw].to_vec()))
        .collect();
    AstCandidate::from_nontrivial_unchecked(ctx.n, nontrivial)
}

/// Compares two disjoint relation bitsets as sorted triple lists: the block
/// containing the least element of the symmetric difference is smaller.
fn cmp_blocks(a: &[u64], b: &[u64]) -> Ordering {
    for (wa, wb) in a.iter().zip(b) {
        if wa != wb {
            let low = (wa ^ wb) & (wa ^ wb).wrapping_neg();
            return if wa & low != 0 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
        }
    }
    Ordering::Equal
}

fn cmp_forms(a: &[u64], b: &[u64], rel_words: usize) -> Ordering {
    for (ba, bb) in a.chunks_exact(rel_words).zip(b.chunks_exact(rel_words)) {
        match cmp_blocks(ba, bb) {
            Ordering::Equal => {}
            other => return other,
        }
    }
    Ordering::Equal
}

/// Writes `blocks` into `form` with blocks sorted canonically.
fn canonical_block_order(blocks: &[u64], form: &mut [u64], order: &mut [usize], rel_words: usize, k: usize) {
    for (i, slot) in order.iter_mut().enumerate().take(k) {
        *slot = i;
    }
    order[..k].sort_unstable_by(|&a, &b| {
        cmp_blocks(
            &blocks[a * rel_words..(a + 1) * rel_words],
            &blocks[b * rel_words..(b + 1) * rel_words],
        )
    });
    for (pos, &src) in order[..k].iter().enumerate() {
        form[pos * rel_words..(pos + 1) * rel_words]
            .copy_from_slice(&blocks[src * rel_words..(src + 1) * rel_words]);
    }
}

/// Stage reached by one scanned candidate.
#[derive(Clone)]
enum ScanOutcome {
    FailedValency,
    FailedClosure,
    FailedRegularity,
    Scheme(Box<AstCandidate>),
}

fn scan_candidate(ctx: &ScanContext, scratch: &mut Scratch, assignment: &[u8], k: usize) -> ScanOutcome {
    if ctx.checks.valency && !passes_valency_prefilter(ctx, scratch, assignment, k) {
        return ScanOutcome::FailedValency;
    }
    build_blocks(ctx, scratch, assignment, k);
    let candidate = candidate_from_blocks(ctx, &scratch.block_words, k);
    if ctx.checks.closure && crate::axioms::check_coordinate_closure(&candidate).is_err() {
        return ScanOutcome::FailedClosure;
    }
    if ctx.checks.regularity && crate::axioms::check_regularity(&candidate).is_err() {
        return ScanOutcome::FailedRegularity;
    }
    ScanOutcome::Scheme(Box::new(candidate))
}

fn scan_axioms_first(
    ctx: &ScanContext,
    orbit_list: &[TernaryRelation],
    k: usize,
) -> Result<(Vec<AstClass>, OrderStats)> {
    let mut stream = enumerate_orbit_partitions(orbit_list, k)?;
    let width = ctx.orbit_count;
    let mut buffer: Vec<u8> = Vec::with_capacity(CHUNK * width);
    let mut stats = OrderStats {
        order: k + 3,
        enumerated: 0,
        valency_pass: 0,
        closure_pass: 0,
        regularity_pass: 0,
        transversal: None,
        classes: 0,
    };
    let mut survivors: Vec<AstCandidate> = Vec::new();
    loop {
        buffer.clear();
        while buffer.len() < CHUNK * width {
            match stream.next_assignment() {
                Some(a) => buffer.extend_from_slice(a),
                None => break,
            }
        }
        if buffer.is_empty() {
            break;
        }
        let outcomes: Vec<ScanOutcome> = buffer
            .par_chunks(width)
            .map_init(
                || Scratch::new(ctx, k),
                |scratch, assignment| scan_candidate(ctx, scratch, assignment, k),
            )
            .collect();
        for outcome in outcomes {
            stats.enumerated += 1;
            match outcome {
                ScanOutcome::FailedValency => {}
                ScanOutcome::FailedClosure => stats.valency_pass += 1,
                ScanOutcome::FailedRegularity => {
                    stats.valency_pass += 1;
                    stats.closure_pass += 1;
                }
                ScanOutcome::Scheme(candidate) => {
                    stats.valency_pass += 1;
                    stats.closure_pass += 1;
                    stats.regularity_pass += 1;
                    survivors.push(*candidate);
                }
            }
        }
        if buffer.len() < CHUNK * width {
            break;
        }
    }
    let classes = group_survivors(survivors, k + 3);
    stats.classes = classes.len();
    Ok((classes, stats))
}

/// Groups axiom survivors into isomorphism classes and builds the class
/// records, sorted by key.
fn group_survivors(survivors: Vec<AstCandidate>, order: usize) -> Vec<AstClass> {
    let mut groups: BTreeMap<CanonicalKey, (CanonicalKey, u64)> = BTreeMap::new();
    for candidate in survivors {
        let key = isomorphism_key(&candidate);
        let own = candidate.canonical_form();
        groups
            .entry(key)
            .and_modify(|(best, count)| {
                if own < *best {
                    *best = own.clone();
                }
                *count += 1;
            })
            .or_insert((own, 1));
    }
    groups
        .into_iter()
        .map(|(key, (best, members_found))| {
            let representative = best.to_candidate();
            let orbit_size = partition_orbit_size(&representative);
            AstClass {
                order,
                key,
                representative,
                members_found,
                orbit_size,
            }
        })
        .collect()
}

/// Left-coset representatives of `subgroup` in `S_n`, identity first.
fn left_coset_representatives(n: usize, subgroup: &PermGroup) -> Vec<Permutation> {
    let mut reps = Vec::new();
    let mut covered: std::collections::HashSet<Permutation> = std::collections::HashSet::new();
    for p in all_permutations(n) {
        if covered.contains(&p) {
            continue;
        }
        for g in subgroup.elements() {
            covered.insert(p.compose(g));
        }
        reps.push(p);
    }
    reps
}

/// Triple-index relabeling tables for a set of permutations.
fn relabel_tables(n: usize, perms: &[Permutation]) -> Vec<Vec<u32>> {
    perms
        .iter()
        .map(|p| {
            (0..n * n * n)
                .map(|idx| p.relabel_triple(Triple::from_index(idx, n)).index(n) as u32)
                .collect()
        })
        .collect()
}

fn scan_isomorphism_first(
    ctx: &ScanContext,
    orbit_list: &[TernaryRelation],
    job: &ClassificationJob,
    k: usize,
) -> Result<(Vec<AstClass>, OrderStats)> {
    let n = ctx.n;
    // Candidate partitions are invariant under the job's group for the
    // relabeling action, so canonical forms are constant on left cosets and
    // representatives suffice. The coordinate action gives no such reduction.
    let reps = match job.action.kind() {
        ActionKind::Relabel => left_coset_representatives(n, job.action.group()),
        ActionKind::CoordPermute => all_permutations(n),
    };
    let tables = relabel_tables(n, &reps);

    let mut stream = enumerate_orbit_partitions(orbit_list, k)?;
    let width = ctx.orbit_count;
    let mut buffer: Vec<u8> = Vec::with_capacity(CHUNK * width);
    let mut stats = OrderStats {
        order: k + 3,
        enumerated: 0,
        valency_pass: 0,
        closure_pass: 0,
        regularity_pass: 0,
        transversal: None,
        classes: 0,
    };
    let mut seen: HashMap<Box<[u64]>, u64> = HashMap::new();
    loop {
        buffer.clear();
        let mut items = 0u64;
        while buffer.len() < CHUNK * width {
            match stream.next_assignment() {
                Some(a) => {
                    buffer.extend_from_slice(a);
                    items += 1;
                }
                None => break,
            }
        }
        if items == 0 {
            break;
        }
        stats.enumerated += items;
        let chunk_map = buffer
            .par_chunks(width)
            .fold(
                || (Scratch::new(ctx, k), HashMap::<Box<[u64]>, u64>::new()),
                |(mut scratch, mut map), assignment| {
                    let key = min_form_over(ctx, &mut scratch, assignment, k, &tables);
                    *map.entry(key).or_insert(0) += 1;
                    (scratch, map)
                },
            )
            .map(|(_, map)| map)
            .reduce(HashMap::new, |mut a, b| {
                for (key, count) in b {
                    *a.entry(key).or_insert(0) += count;
                }
                a
            });
        for (key, count) in chunk_map {
            *seen.entry(key).or_insert(0) += count;
        }
        if (items as usize) < CHUNK {
            break;
        }
    }

    stats.transversal = Some(seen.len() as u64);
    let mut entries: Vec<(Box<[u64]>, u64)> = seen.into_iter().collect();
    entries.sort_unstable_by(|a, b| cmp_forms(&a.0, &b.0, ctx.rel_words));

    let orbit_ids = orbit_id_table(ctx, orbit_list);
    let mut classes = Vec::new();
    for (form, members_found) in entries {
        let candidate = candidate_from_blocks(ctx, &form, k);
        let report = validate_ast_with(&candidate, ctx.checks);
        match &report.failure {
            Some(f) => match f.condition() {
                1 => {}
                3 => stats.valency_pass += 1,
                _ => {
                    stats.valency_pass += 1;
                    stats.closure_pass += 1;
                }
            },
            None => {
                stats.valency_pass += 1;
                stats.closure_pass += 1;
                stats.regularity_pass += 1;
                let representative = invariant_representative(&candidate, &orbit_ids, ctx)
                    .expect("every class of the scan contains an invariant member");
                let orbit_size = partition_orbit_size(&representative);
                classes.push(AstClass {
                    order: k + 3,
                    key: candidate.canonical_form(),
                    representative,
                    members_found,
                    orbit_size,
                });
            }
        }
    }
    stats.classes = classes.len();
    Ok((classes, stats))
}

/// Minimum canonical form of the candidate described by `assignment` over
/// the given relabeling tables, as packed block words.
fn min_form_over(
    ctx: &ScanContext,
    scratch: &mut Scratch,
    assignment: &[u8],
    k: usize,
    tables: &[Vec<u32>],
) -> Box<[u64]> {
    let rw = ctx.rel_words;
    build_blocks(ctx, scratch, assignment, k);
    canonical_block_order(
        &scratch.block_words,
        &mut scratch.best,
        &mut scratch.order,
        rw,
        k,
    );
    for table in &tables[1..] {
        let blocks = &scratch.block_words;
        let relabeled = &mut scratch.relabeled;
        relabeled[..k * rw].fill(0);
        for b in 0..k {
            for (w, &word) in blocks[b * rw..(b + 1) * rw].iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let idx = w * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    let image = table[idx] as usize;
                    relabeled[b * rw + image / 64] |= 1u64 << (image % 64);
                }
            }
        }
        canonical_block_order(
            &scratch.relabeled,
            &mut scratch.form,
            &mut scratch.order,
            rw,
            k,
        );
        if cmp_forms(&scratch.form[..k * rw], &scratch.best[..k * rw], rw) == Ordering::Less {
            scratch.best[..k * rw].copy_from_slice(&scratch.form[..k * rw]);
        }
    }
    scratch.best[..k * rw].to_vec().into_boxed_slice()
}

/// Orbit id of every triple in the scan domain, by triple index.
fn orbit_id_table(ctx: &ScanContext, orbit_list: &[TernaryRelation]) -> Vec<u32> {
    let mut ids = vec![u32::MAX; ctx.n * ctx.n * ctx.n];
    for (o, orbit) in orbit_list.iter().enumerate() {
        for t in orbit.iter() {
            ids[t.index(ctx.n)] = o as u32;
        }
    }
    ids
}

/// Finds the least-form relabeling of `x` whose nontrivial blocks are all
/// unions of the job's orbits, i.e. the class representative the
/// axioms-first pipeline would pick.
fn invariant_representative(
    x: &AstCandidate,
    orbit_ids: &[u32],
    ctx: &ScanContext,
) -> Option<AstCandidate> {
    let n = ctx.n;
    let mut best: Option<AstCandidate> = None;
    for p in all_permutations(n) {
        let y = x.relabeled(&p);
        let union_of_orbits = y.nontrivial().iter().all(|block| {
            block.iter().all(|t| {
                let orbit = orbit_ids[t.index(n)] as usize;
                ctx.orbit_word_slice(orbit)
                    .iter()
                    .zip(block.words())
                    .all(|(ow, bw)| ow & bw == *ow)
            })
        });
        if union_of_orbits {
            match &best {
                Some(b) if b.canonical_form() <= y.canonical_form() => {}
                _ => best = Some(y),
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trivial_job(n: usize, orders: OrderSelection) -> ClassificationJob {
        ClassificationJob::new(n, GroupAction::relabel(PermGroup::trivial(n)), orders)
    }

    fn cyclic_job(n: usize, orders: OrderSelection) -> ClassificationJob {
        let cycle: Vec<usize> = (1..=n).collect();
        ClassificationJob::new(
            n,
            GroupAction::relabel(PermGroup::cyclic(n, &cycle).unwrap()),
            orders,
        )
    }

    fn coord_s3_job(n: usize, orders: OrderSelection) -> ClassificationJob {
        ClassificationJob::new(
            n,
            GroupAction::coordinate(PermGroup::symmetric(3)).unwrap(),
            orders,
        )
    }

    fn full_domain_class(n: usize) -> CanonicalKey {
        AstCandidate::new(n, vec![nontrivial_domain(n).unwrap()])
            .unwrap()
            .canonical_form()
    }

    #[test]
    fn n3_trivial_group_all_orders_finds_the_unique_scheme() {
        let result = classify(&trivial_job(3, OrderSelection::All)).unwrap();
        assert_eq!(result.classes.len(), 1);
        let class = &result.classes[0];
        assert_eq!(class.order, 4);
        assert_eq!(class.key, full_domain_class(3));
        assert_eq!(class.orbit_size, 1);
        assert_eq!(result.total_enumerated(), 203); // Bell(6)
    }

    #[test]
    fn n4_coordinate_action_gives_one_symmetric_scheme() {
        let result = classify(&coord_s3_job(4, OrderSelection::All)).unwrap();
        assert_eq!(result.classes.len(), 1);
        assert_eq!(result.classes[0].order, 4);
        assert_eq!(result.classes[0].key, full_domain_class(4));
    }

    #[test]
    fn n4_cyclic_group_matches_the_symmetric_scheme() {
        let result = classify(&cyclic_job(4, OrderSelection::All)).unwrap();
        assert_eq!(result.classes.len(), 1);
        assert_eq!(
            result.classes[0].representative.canonical_form(),
            full_domain_class(4)
        );
        assert_eq!(result.total_enumerated(), 203); // Bell(6): 6 orbits
    }

    #[test]
    fn n5_cyclic_single_order_6_matches_reference() {
        let result = classify(&cyclic_job(5, OrderSelection::Single(6))).unwrap();
        assert_eq!(result.classes.len(), 1);
        let class = &result.classes[0];
        assert_eq!(class.order, 6);
        assert_eq!(class.representative.relations().len(), 7);
        let golden = crate::document::AstDocument::parse_text(include_str!(
            "../golden/n5_order6.ast"
        ))
        .unwrap()
        .to_candidate()
        .unwrap();
        assert_eq!(class.key, isomorphism_key(&golden));
    }

    #[test]
    fn build_candidate_validates_and_matches_reference_listing() {
        let n = 5;
        let domain = nontrivial_domain(n).unwrap();
        let action = GroupAction::relabel(PermGroup::cyclic(5, &[1, 2, 3, 4, 5]).unwrap());
        let orbit_list = orbits(&action, &domain).unwrap();
        assert_eq!(orbit_list.len(), 12);

        // single block over all orbits is the order-4 scheme
        let single = build_candidate(&orbit_list, &[(0..12).collect()], n).unwrap();
        assert_eq!(single.canonical_form(), full_domain_class(5));

        // overlapping and non-covering block lists are rejected
        assert!(build_candidate(&orbit_list, &[(0..12).collect(), vec![0]], n).is_err());
        assert!(build_candidate(&orbit_list, &[vec![0, 1, 2]], n).is_err());

        // grouping the orbits by the reference relations reproduces them
        let golden = crate::document::AstDocument::parse_text(include_str!(
            "../golden/n5_order6.ast"
        ))
        .unwrap()
        .to_candidate()
        .unwrap();
        let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); 3];
        for (o, orbit) in orbit_list.iter().enumerate() {
            let t = orbit.min_triple().unwrap();
            let owner = golden
                .nontrivial()
                .iter()
                .position(|r| r.contains(t))
                .expect("reference relations cover the domain");
            blocks[owner].push(o);
        }
        let rebuilt = build_candidate(&orbit_list, &blocks, n).unwrap();
        assert_eq!(rebuilt, golden);
    }

    #[test]
    fn isomorphism_classes_group_relabeled_copies() {
        let n = 4;
        let x = AstCandidate::new(n, vec![nontrivial_domain(n).unwrap()]).unwrap();
        let swap = Permutation::parse_cycles(n, "(1,2)").unwrap();
        let y = x.relabeled(&swap);
        let classes = isomorphism_classes(&[x.clone(), y], n).unwrap();
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].members, vec![0, 1]);
        assert_eq!(classes[0].representative, x);
    }

    #[test]
    fn two_transitive_orbit_construction() {
        // S4 is two-transitive; its distinct-triple action is transitive
        let s4 = PermGroup::symmetric(4);
        let x = ast_from_group_orbits(&s4, 4).unwrap();
        assert_eq!(x.order(), 4);
        assert_eq!(x.canonical_form(), full_domain_class(4));

        // the affine group of GF(5) gives the order-7 circulant scheme
        let agl = PermGroup::from_generators(
            5,
            vec![
                Permutation::parse_cycles(5, "(1,2,3,4,5)").unwrap(),
                Permutation::parse_cycles(5, "(1,2,4,3)").unwrap(),
            ],
        )
        .unwrap();
        let x = ast_from_group_orbits(&agl, 5).unwrap();
        assert_eq!(x.order(), 6);
        assert_eq!(x.relations().len(), 7);

        // a transitive but not two-transitive group fails at the prefix
        let c4 = PermGroup::cyclic(4, &[1, 2, 3, 4]).unwrap();
        assert!(matches!(
            ast_from_group_orbits(&c4, 4),
            Err(GroupAstError::TrivialPrefixMismatch { .. })
        ));
    }

    #[test]
    fn legacy_pipeline_matches_default_on_small_jobs() {
        for mut job in [
            trivial_job(3, OrderSelection::All),
            cyclic_job(4, OrderSelection::All),
            coord_s3_job(4, OrderSelection::All),
        ] {
            let default = classify(&job).unwrap();
            job.pipeline = PipelineOrder::IsomorphismFirst;
            let legacy = classify(&job).unwrap();
            assert_eq!(default.classes, legacy.classes);
            assert_eq!(
                default.per_order.iter().map(|s| s.enumerated).collect::<Vec<_>>(),
                legacy.per_order.iter().map(|s| s.enumerated).collect::<Vec<_>>(),
            );
        }
    }

    #[test]
    fn representatives_are_valid_and_orbit_unions() {
        for job in [
            cyclic_job(5, OrderSelection::All),
            coord_s3_job(4, OrderSelection::All),
            cyclic_job(4, OrderSelection::All),
        ] {
            let orbit_list = orbits(&job.action, &nontrivial_domain(job.n).unwrap()).unwrap();
            let result = classify(&job).unwrap();
            assert!(!result.classes.is_empty());
            for class in &result.classes {
                assert!(crate::axioms::validate_ast(&class.representative).is_ast());
                for block in class.representative.nontrivial() {
                    for orbit in &orbit_list {
                        let inter = orbit.iter().filter(|t| block.contains(*t)).count();
                        assert!(
                            inter == 0 || inter == orbit.len(),
                            "block splits an orbit"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn isomorphism_keys_are_relabeling_invariant() {
        let golden = crate::document::AstDocument::parse_text(include_str!(
            "../golden/n4_order5.ast"
        ))
        .unwrap()
        .to_candidate()
        .unwrap();
        let key = isomorphism_key(&golden);
        for p in PermGroup::symmetric(4).elements() {
            assert_eq!(isomorphism_key(&golden.relabeled(p)), key);
        }
    }

    #[test]
    fn classify_rejects_bad_orders() {
        assert!(classify(&trivial_job(3, OrderSelection::Single(3))).is_err());
        assert!(classify(&trivial_job(3, OrderSelection::Single(10))).is_err());
        assert!(classify(&trivial_job(3, OrderSelection::Single(9))).is_ok());
    }

    #[test]
    fn prefilter_agrees_with_valency_check() {
        let n = 4;
        let domain = nontrivial_domain(n).unwrap();
        let action = GroupAction::relabel(PermGroup::cyclic(4, &[1, 2, 3, 4]).unwrap());
        let orbit_list = orbits(&action, &domain).unwrap();
        let ctx = ScanContext::new(n, &orbit_list, EnabledChecks::default());
        for k in 1..=orbit_list.len() {
            let mut scratch = Scratch::new(&ctx, k);
            let mut stream = enumerate_orbit_partitions(&orbit_list, k).unwrap();
            while let Some(assignment) = stream.next_assignment() {
                let assignment = assignment.to_vec();
                let fast = passes_valency_prefilter(&ctx, &mut scratch, &assignment, k);
                let blocks: Vec<Vec<usize>> = (0..k)
                    .map(|b| {
                        (0..orbit_list.len())
                            .filter(|&o| assignment[o] as usize == b)
                            .collect()
                    })
                    .collect();
                let candidate = build_candidate(&orbit_list, &blocks, n).unwrap();
                let slow = crate::axioms::check_valency(&candidate).is_ok();
                assert_eq!(fast, slow, "assignment {assignment:?}");
            }
        }
    }

    #[test]
    fn monotone_under_subgroups() {
        // every scheme invariant under AGL(1,5) is also found with its C5 subgroup
        let agl = PermGroup::from_generators(
            5,
            vec![
                Permutation::parse_cycles(5, "(1,2,3,4,5)").unwrap(),
                Permutation::parse_cycles(5, "(1,2,4,3)").unwrap(),
            ],
        )
        .unwrap();
        let big = classify(&ClassificationJob::new(
            5,
            GroupAction::relabel(agl),
            OrderSelection::All,
        ))
        .unwrap();
        assert_eq!(big.total_enumerated(), 5); // Bell(3)
        let small = classify(&cyclic_job(5, OrderSelection::All)).unwrap();
        let small_keys: Vec<_> = small.classes.iter().map(|c| (c.order, c.key.clone())).collect();
        for class in &big.classes {
            assert!(small_keys.contains(&(class.order, class.key.clone())));
        }
        assert_eq!(big.classes.len(), 2);
        assert_eq!(small.classes.len(), 2);
    }

    #[test]
    fn coordinate_action_stays_distinct_from_relabeling() {
        // guard against mixing the two actions: the S3 coordinate orbits on
        // n=4 are 4 orbits of 6, while relabeling S4 gives a single orbit
        let domain = nontrivial_domain(4).unwrap();
        let coord = orbits(
            &GroupAction::coordinate(PermGroup::symmetric(3)).unwrap(),
            &domain,
        )
        .unwrap();
        let relabel = orbits(&GroupAction::relabel(PermGroup::symmetric(4)), &domain).unwrap();
        assert_eq!(coord.len(), 4);
        assert_eq!(relabel.len(), 1);
    }
}
