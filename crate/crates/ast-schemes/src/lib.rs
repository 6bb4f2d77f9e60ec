//! Enumeration, validation and classification of association schemes on
//! triples (ASTs) over small vertex sets.
//!
//! An AST of order `m` on a set of `n >= 3` vertices is a partition of the
//! cube `Omega^3` into relations `R0..=Rm` where the first four are the fixed
//! trivial relations and three counting axioms hold: constant pair-completion
//! valencies, constant intersection numbers, and closure under coordinate
//! permutations. This crate classifies, up to relabeling isomorphism, all
//! ASTs whose nontrivial relations are invariant under a chosen group action,
//! by streaming set partitions of the action's orbits through the axiom
//! checks.
//!
//! The main entry points are [`classify::classify`] for classification jobs,
//! [`axioms::validate_ast`] for checking a single candidate, and
//! [`classify::ast_from_group_orbits`] for the scheme induced by a
//! two-transitive group action. The `ast-schemes` binary wraps these as
//! `enumerate`, `verify`, `invariants` and `paper-suite` subcommands.

pub mod axioms;
pub mod candidate;
pub mod classify;
pub mod document;
pub mod error;
pub mod groupspec;
pub mod perm;
pub mod relations;
pub mod rgs;
pub mod suite;

/// Largest vertex count the relation types support.
pub const MAX_VERTICES: usize = 12;

pub use axioms::{validate_ast, AstReport, EnabledChecks};
pub use candidate::{AstCandidate, CanonicalKey};
pub use classify::{
    classify, ClassificationJob, ClassificationResult, OrderSelection, PipelineOrder,
};
pub use document::AstDocument;
pub use error::{Error, Result};
pub use groupspec::GroupSpec;
pub use perm::{CoordPerm, GroupAction, PermGroup, Permutation};
pub use relations::{nontrivial_domain, trivial_relations, TernaryRelation, Triple};
