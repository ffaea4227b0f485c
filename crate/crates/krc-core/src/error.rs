//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors reported by graph construction, witnesses, solvers and generators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KrcError {
    /// A vertex id is not below the vertex count.
    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange {
        /// Offending id.
        vertex: usize,
        /// Vertex count of the graph.
        n: usize,
    },
    /// A zero-weight arc was supplied to a graph that does not allow them.
    #[error("arc ({tail},{head}) has weight 0 but zero weights are not allowed")]
    ZeroWeight {
        /// Tail of the arc.
        tail: usize,
        /// Head of the arc.
        head: usize,
    },
    /// A center set contains an irrelevant vertex.
    #[error("vertex {0} is irrelevant and cannot be a center")]
    IrrelevantCenter(usize),
    /// A relevant vertex cannot be reached from the center set.
    #[error("vertex {0} is unreachable from the center set")]
    Unreachable(usize),
    /// A vertex lies farther than the radius allowed by the caller.
    #[error("vertex {vertex} is at distance {distance}, beyond radius {radius}")]
    BeyondRadius {
        /// Offending vertex.
        vertex: usize,
        /// Its distance from the centers.
        distance: u64,
        /// The radius bound.
        radius: u64,
    },
    /// An enumeration would exceed its configured size limit.
    #[error("{what}: enumeration size {size} exceeds limit {limit}")]
    LimitExceeded {
        /// Which enumeration.
        what: &'static str,
        /// Requested size (saturating).
        size: u128,
        /// Configured limit.
        limit: u128,
    },
    /// A tree decomposition is not valid for the graph.
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),
    /// A clique-width expression is malformed or does not match a graph.
    #[error("invalid clique-width expression: {0}")]
    InvalidExpression(String),
    /// A solver precondition on the input graph does not hold.
    #[error("unsupported input: {0}")]
    Unsupported(String),
    /// A parameter is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A supplied vertex set is not a vertex cover.
    #[error("vertex set is not a vertex cover: edge ({0},{1}) uncovered")]
    NotAVertexCover(usize, usize),
    /// A truth assignment does not satisfy the formula.
    #[error("assignment does not satisfy clause {0}")]
    Unsatisfying(usize),
    /// A variable group has more satisfying partial assignments than slots.
    #[error("group {group} has {count} satisfying partial assignments but only {slots} slots")]
    GroupOverflow {
        /// Group index.
        group: usize,
        /// Number of satisfying partial assignments.
        count: usize,
        /// Available slots.
        slots: usize,
    },
    /// An internal consistency check failed.
    #[error("internal error: {0}")]
    Internal(String),
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, KrcError>;
