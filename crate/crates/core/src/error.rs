use thiserror::Error;

/// Errors raised when constructing or wrapping geometric values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate in {what}")]
    NonFinite { what: &'static str },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("geometric values must have at least one axis")]
    EmptyDimension,
    #[error("cell axis {axis} is degenerate: upper must be strictly greater than lower")]
    DegenerateCell { axis: usize },
    #[error("negative extent on axis {axis}")]
    NegativeExtent { axis: usize },
}

/// Errors raised by tree configuration and mutation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum RTreeError {
    #[error("invalid occupancy bounds: require 2 <= m <= ceil(M/2), got m={min}, M={max}")]
    InvalidOccupancy { min: usize, max: usize },
    #[error("dimension mismatch: tree is {expected}-dimensional, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("object id {0} is already present")]
    DuplicateId(u64),
    #[error("box is not canonical under the tree boundary (axis {axis})")]
    NonCanonicalBox { axis: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Errors raised while encoding or decoding tree snapshots.
#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("unsupported snapshot format version {0} (expected {expected})", expected = crate::snapshot::FORMAT_VERSION)]
    UnsupportedVersion(u32),
    #[error("snapshot is malformed: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Tree(#[from] RTreeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
