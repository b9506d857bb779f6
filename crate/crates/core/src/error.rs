use thiserror::Error;

/// Errors across the library. Display strings start with a stable kebab-case
/// tag so the CLI and file formats can match on them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("collinear: triangle vertices are collinear")]
    Collinear,
    #[error("invalid-parents: vertex {vertex} has non-adjacent parents ({p}, {q})")]
    InvalidParents { vertex: u32, p: u32, q: u32 },
    #[error("order-violation: vertex {vertex} references parent {parent} not strictly earlier")]
    OrderViolation { vertex: u32, parent: u32 },
    #[error("not-linear: 2-tree has an edge with more than one nontrivial side edge")]
    NotLinear,
    #[error("invalid-skeleton: {0}")]
    InvalidSkeleton(String),
    #[error("invalid-face: no live internal face {0:?}")]
    InvalidFace((u32, u32, u32)),
    #[error("invalid-size: {0}")]
    InvalidSize(String),
    #[error("invalid-op: {0}")]
    InvalidOp(String),
    #[error("invalid-epsilon: epsilon must be positive")]
    InvalidEpsilon,
    #[error("frame-too-small: {0}")]
    FrameTooSmall(String),
    #[error("precision-exhausted: placement search failed at step {step}")]
    PrecisionExhausted { step: usize },
    #[error("degenerate-edge: edge ({0}, {1}) has zero length")]
    DegenerateEdge(u32, u32),
    #[error("no-edges: graph has no edges")]
    NoEdges,
    #[error("not-nested-triangles: {0}")]
    NotNestedTriangles(String),
    #[error("improper-input: {0}")]
    ImproperInput(String),
    #[error("parse-error: {0}")]
    Parse(String),
    #[error("invariant-violation: {0}")]
    InvariantViolation(String),
}

pub type Result<T> = std::result::Result<T, Error>;
