use thiserror::Error;

use crate::geom::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("zero-length segment at {0}")]
    ZeroLength(Point),
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("degenerate ray: angle vertex coincides with a ray point")]
    DegenerateRay,
    #[error("empty point set")]
    EmptyPointSet,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstanceError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("segment {0} has zero length")]
    ZeroLength(usize),
    #[error("segments {0} and {1} are the same segment")]
    Duplicate(usize, usize),
    #[error("segment {0} is not axis-parallel")]
    NotAxisParallel(usize),
    #[error("endpoint {point} joins parallel segments {a} and {b}")]
    ParallelAtEndpoint { point: Point, a: usize, b: usize },
    #[error("segment index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("points must differ")]
    SamePoint,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinkError {
    #[error("oracle is capped at {cap} segments, family has {n}")]
    CapExceeded { cap: usize, n: usize },
    #[error("malformed witness: {0}")]
    Parse(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("input must be a valid interior-disjoint family: {0}")]
    Invalid(String),
    #[error("coordinate {0} is not an integer")]
    NonInteger(Point),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("family has no horizontal-vertical incidence to host the extended gadget")]
    NoIncidence,
    #[error("empty family")]
    Empty,
    #[error("delta must be positive")]
    NonPositiveDelta,
    #[error("gadget output is not disjoint: segments {a} and {b} meet at {at}")]
    Overlap { a: usize, b: usize, at: Point },
    #[error("segment {0} collapses while hosting its gadgets")]
    HostCollapse(usize),
    #[error("malformed report: {0}")]
    Report(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error("report does not match family: {0}")]
    Mismatch(String),
}
