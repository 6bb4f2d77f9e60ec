use thiserror::Error;

use crate::relations::Triple;

/// Errors raised while constructing the combinatorial objects of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex count must be at least 3, got {0}")]
    VertexCountTooSmall(usize),

    #[error("vertex count {0} exceeds the supported maximum of {max}", max = crate::MAX_VERTICES)]
    VertexCountTooLarge(usize),

    #[error("permutation image {0:?} is not a bijection on 1..={1}")]
    NotABijection(Vec<u8>, usize),

    #[error("permutation degree {found} does not match expected degree {expected}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("label {label} out of range 1..={n}")]
    LabelOutOfRange { label: usize, n: usize },

    #[error("group closure exceeded the order cap of {cap}")]
    GroupOrderCap { cap: u64 },

    #[error("group action maps {point} outside the orbit domain (image {image})")]
    OrbitEscapesDomain { point: Triple, image: Triple },

    #[error("block count {k} out of range 1..={max}")]
    BlockCountOutOfRange { k: usize, max: usize },

    #[error("invalid candidate partition: {0}")]
    InvalidPartition(String),

    #[error("invalid group specification `{spec}`: {reason}")]
    InvalidGroupSpec { spec: String, reason: String },

    #[error("invalid classification job: {0}")]
    InvalidJob(String),

    #[error("document parse error at line {line}, column {col}: {msg}")]
    DocumentParse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
