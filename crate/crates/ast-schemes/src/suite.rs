//! The built-in reproduction suite: five classification jobs over 3, 4 and 5
//! vertices whose outcomes are pinned, including two reference schemes
//! embedded as golden documents.

use crate::axioms::EnabledChecks;
use crate::candidate::AstCandidate;
use crate::classify::{
    classify, isomorphism_key, ClassificationJob, ClassificationResult, OrderSelection,
    PipelineOrder,
};
use crate::document::AstDocument;
use crate::error::Result;
use crate::groupspec::GroupSpec;
use crate::relations::nontrivial_domain;

pub const GOLDEN_N4_ORDER5: &str = include_str!("../golden/n4_order5.ast");
pub const GOLDEN_N5_ORDER6: &str = include_str!("../golden/n5_order6.ast");

/// The reference order-5 scheme on 4 vertices.
pub fn reference_n4_order5() -> AstCandidate {
    AstDocument::parse_text(GOLDEN_N4_ORDER5)
        .expect("embedded document parses")
        .to_candidate()
        .expect("embedded document is a valid partition")
}

/// The reference circulant scheme on 5 vertices: seven relations, three of
/// them nontrivial, i.e. order 6.
pub fn reference_n5_order6() -> AstCandidate {
    AstDocument::parse_text(GOLDEN_N5_ORDER6)
        .expect("embedded document parses")
        .to_candidate()
        .expect("embedded document is a valid partition")
}

#[derive(Copy, Clone, Debug, Default)]
pub struct SuiteOptions {
    pub pipeline: PipelineOrder,
    pub checks: EnabledChecks,
}

#[derive(Clone, Debug)]
pub struct SuiteRow {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteOutcome {
    pub rows: Vec<SuiteRow>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.passed)
    }
}

fn job(n: usize, spec: &str, orders: OrderSelection, opts: SuiteOptions) -> Result<ClassificationJob> {
    let spec = GroupSpec::parse(spec)?;
    let mut job = ClassificationJob::new(n, spec.to_action(n)?, orders);
    job.group_label = Some(spec.to_string());
    job.pipeline = opts.pipeline;
    job.checks = opts.checks;
    Ok(job)
}

/// True when the result has exactly one class whose sole nontrivial relation
/// is the full distinct-triple domain.
fn is_unique_full_domain(result: &ClassificationResult, n: usize) -> bool {
    let full = AstCandidate::new(n, vec![nontrivial_domain(n).expect("n >= 3")])
        .expect("full domain is a valid candidate");
    result.classes.len() == 1
        && result.classes[0].order == 4
        && result.classes[0].representative == full
}

fn row(name: &'static str, passed: bool, detail: String) -> SuiteRow {
    SuiteRow {
        name,
        passed,
        detail,
    }
}

/// Runs the five reference jobs and compares class counts and canonical
/// forms against the pinned expectations.
pub fn run_reference_suite(opts: SuiteOptions) -> Result<SuiteOutcome> {
    let mut rows = Vec::new();

    {
        let result = classify(&job(3, "trivial", OrderSelection::All, opts)?)?;
        let passed = is_unique_full_domain(&result, 3);
        rows.push(row(
            "n=3 trivial group, all orders",
            passed,
            format!(
                "expected 1 class of order 4 with the full nontrivial domain; found {} class(es)",
                result.classes.len()
            ),
        ));
    }

    {
        let r4 = classify(&job(4, "coord-s3", OrderSelection::All, opts)?)?;
        let r5 = classify(&job(5, "coord-s3", OrderSelection::All, opts)?)?;
        let passed = is_unique_full_domain(&r4, 4) && is_unique_full_domain(&r5, 5);
        rows.push(row(
            "n=4 and n=5 coordinate-S3 invariance, all orders",
            passed,
            format!(
                "expected the unique symmetric scheme for each; found {} and {} class(es)",
                r4.classes.len(),
                r5.classes.len()
            ),
        ));
    }

    {
        let cyclic = classify(&job(4, "cyclic:(1,2,3,4)", OrderSelection::All, opts)?)?;
        let coordinate = classify(&job(4, "coord-s3", OrderSelection::All, opts)?)?;
        let passed = cyclic.classes.len() == 1
            && coordinate.classes.len() == 1
            && cyclic.classes[0].representative.canonical_form()
                == coordinate.classes[0].representative.canonical_form();
        rows.push(row(
            "n=4 cyclic invariance matches the symmetric scheme",
            passed,
            format!(
                "expected 1 class with the same canonical form as the coordinate-S3 run; found {} class(es)",
                cyclic.classes.len()
            ),
        ));
    }

    {
        let result = classify(&job(4, "trivial", OrderSelection::Single(5), opts)?)?;
        let stats = result.stats_for_order(5);
        let enumerated = stats.map_or(0, |s| s.enumerated);
        let reference_key = isomorphism_key(&reference_n4_order5());
        let passed = enumerated == 8_388_607
            && result.classes.len() == 1
            && result.classes[0].key == reference_key;
        rows.push(row(
            "n=4 trivial group, order 5",
            passed,
            format!(
                "expected 8,388,607 candidates and 1 class matching the embedded reference; scanned {enumerated}, found {} class(es){}",
                result.classes.len(),
                if result.classes.len() == 1 && result.classes[0].key != reference_key {
                    " (canonical form mismatch)"
                } else {
                    ""
                }
            ),
        ));
    }

    {
        let result = classify(&job(5, "cyclic:(1,2,3,4,5)", OrderSelection::All, opts)?)?;
        let full = AstCandidate::new(5, vec![nontrivial_domain(5)?])?;
        let reference_key = isomorphism_key(&reference_n5_order6());
        let order4_ok = result
            .classes
            .iter()
            .any(|c| c.order == 4 && c.representative == full);
        let order6_ok = result
            .classes
            .iter()
            .any(|c| c.order == 6 && c.key == reference_key);
        let passed = result.classes.len() == 2 && order4_ok && order6_ok;
        rows.push(row(
            "n=5 cyclic invariance, all orders",
            passed,
            format!(
                "expected the order-4 scheme and the seven-relation reference; found {} class(es), orders {:?}",
                result.classes.len(),
                result.classes.iter().map(|c| c.order).collect::<Vec<_>>()
            ),
        ));
    }

    Ok(SuiteOutcome { rows })
}
