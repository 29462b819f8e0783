use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library. Parse errors carry 1-based line
/// numbers so the CLI can point at the offending input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex on each side")]
    EmptySide,

    #[error("side {side} has {size} vertices, the supported maximum is {max}")]
    SideLimit { side: char, size: usize, max: usize },

    #[error("expected {expected} intervals, got {got}")]
    IntervalCount { expected: usize, got: usize },

    #[error("interval [{left}, {right}] of u{u} is out of range for |W| = {n_w}")]
    IntervalRange {
        u: usize,
        left: usize,
        right: usize,
        n_w: usize,
    },

    #[error("vertex {vertex} is out of range")]
    VertexOutOfRange { vertex: String },

    #[error("cut vertices undefined for disconnected graph")]
    DisconnectedGraph,

    #[error("ordering is not a permutation of 1..={n_w}")]
    NotAPermutation { n_w: usize },

    #[error("graph has {n} vertices, brute-force enumeration is capped at {max_n}")]
    SubsetCapExceeded { n: usize, max_n: usize },

    #[error("structural checks need a connected graph with |U| >= 2 and |W| >= 2")]
    CheckPrecondition,

    #[error("solution set contains a non-minimal entry: {set}")]
    NotMinimal { set: String },

    #[error("branching vector must be nonempty with entries >= 1")]
    InvalidBranchingVector,

    #[error("tolerance must be positive")]
    NonPositiveTolerance,

    #[error("root refinement reached |p(x)| = {achieved:e}, above the requested tolerance")]
    ToleranceUnreached { achieved: f64 },

    #[error("multiway branching needs degree >= 3, got {t}")]
    BranchArity { t: u32 },

    #[error("lower-bound family requires an odd k >= 3, got {k}")]
    LowerBoundParam { k: usize },

    #[error("no connected instance after {retries} draws (nU={n_u}, nW={n_w}, seed={seed})")]
    GenerationFailed {
        n_u: usize,
        n_w: usize,
        seed: u64,
        retries: usize,
    },

    #[error("line {line}: expected header `cbg 1`")]
    BadHeader { line: usize },

    #[error("line {line}: expected {expected}")]
    NonInteger { line: usize, expected: &'static str },

    #[error("line {line}: interval [{left}, {right}] is out of range for |W| = {n_w}")]
    IntervalOutOfRangeAt {
        line: usize,
        left: usize,
        right: usize,
        n_w: usize,
    },

    #[error("unexpected end of input: {expected}")]
    UnexpectedEof { expected: &'static str },

    #[error("line {line}: trailing content after the last interval")]
    TrailingContent { line: usize },

    #[error("trace line {line}: {message}")]
    TraceParse { line: usize, message: String },
}
