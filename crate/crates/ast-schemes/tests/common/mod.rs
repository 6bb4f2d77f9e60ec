//! Shared helpers and independent oracles for the integration suites.

#![allow(dead_code)]

use ast_schemes::classify::{ClassificationJob, OrderSelection};
use ast_schemes::{AstCandidate, GroupSpec, TernaryRelation, Triple};

/// Enumerates ALL set partitions of `items` by recursive insertion: each
/// item either joins an existing block or opens a new one. Independent of
/// the restricted-growth-string stream used by the classifier.
pub fn all_partitions<T: Clone>(items: &[T]) -> Vec<Vec<Vec<T>>> {
    fn recurse<T: Clone>(rest: &[T], acc: &mut Vec<Vec<T>>, out: &mut Vec<Vec<Vec<T>>>) {
        let Some((first, tail)) = rest.split_first() else {
            out.push(acc.clone());
            return;
        };
        for i in 0..acc.len() {
            acc[i].push(first.clone());
            recurse(tail, acc, out);
            acc[i].pop();
        }
        acc.push(vec![first.clone()]);
        recurse(tail, acc, out);
        acc.pop();
    }
    let mut out = Vec::new();
    recurse(items, &mut Vec::new(), &mut out);
    out
}

/// Builds a candidate from explicit nontrivial blocks of triples.
pub fn candidate_from_blocks(n: usize, blocks: &[Vec<Triple>]) -> AstCandidate {
    let nontrivial = blocks
        .iter()
        .map(|b| TernaryRelation::from_triples(n, b.iter().copied()))
        .collect();
    AstCandidate::new(n, nontrivial).expect("oracle blocks partition the domain")
}

pub fn job(n: usize, spec: &str, orders: OrderSelection) -> ClassificationJob {
    let spec = GroupSpec::parse(spec).expect("test group spec parses");
    let mut job = ClassificationJob::new(n, spec.to_action(n).expect("valid action"), orders);
    job.group_label = Some(spec.to_string());
    job
}

/// Deterministic 64-bit generator for the randomized invariant checks.
pub struct SplitMix64(pub u64);

impl SplitMix64 {
    pub fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next() % bound
    }
}
