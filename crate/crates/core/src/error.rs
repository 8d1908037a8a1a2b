use thiserror::Error;

use crate::trees::TreeError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] TreeError),

    #[error("weight vector must be non-empty")]
    EmptyWeightVector,

    #[error("weight vector entry {index} is {value}; entries must be positive")]
    NonPositiveWeight { index: usize, value: i64 },

    #[error("weight vector sums to {0}, which is odd")]
    OddWeightSum(i64),

    #[error("weight vector has {found} entries but the tree has {expected} leaves")]
    LeafCountMismatch { expected: usize, found: usize },

    #[error("weighting belongs to a different tree")]
    TreeMismatch,

    #[error("weighting has {found} values but the tree has {expected} edges")]
    EdgeCountMismatch { expected: usize, found: usize },

    #[error("weighting is not a member of the semigroup (trinode {trinode} fails the triangle/parity condition)")]
    NotMember { trinode: usize },

    #[error("weighting is not of degree 1 for the given weight vector")]
    NotDegreeOne,

    #[error("edge {0} is a leaf edge; an internal edge is required")]
    LeafEdge(usize),

    #[error("edge index {0} is out of range")]
    EdgeOutOfRange(usize),

    #[error("leaf index {leaf} is out of range 1..={n}")]
    LeafOutOfRange { leaf: usize, n: usize },

    #[error("chord endpoints must be distinct (got {0}-{0})")]
    LoopChord(usize),

    #[error("pipe counts ({0}, {1}, {2}) fail the triangle/parity condition")]
    NotDelta2(i64, i64, i64),

    #[error("pipe counts must be nonnegative")]
    NegativePipes,

    #[error("weighting has no unique interior point class (R is not a single-point shape)")]
    NotSinglePoint,

    #[error("R has {found} entries, expected {expected}")]
    RLengthMismatch { expected: usize, found: usize },

    #[error("generator degree a must be nonzero")]
    ZeroGeneratorDegree,

    #[error("oracle depth must be at least 1")]
    ZeroDepth,

    #[error("malformed weighting JSON: {0}")]
    WeightingJson(String),

    #[error("malformed piping graph JSON: {0}")]
    PipingJson(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
