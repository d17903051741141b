use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("uniformity must be at least {min}, got {k}")]
    Uniformity { k: usize, min: usize },
    #[error("edge {edge:?} has {found} vertices, expected {expected}")]
    EdgeArity {
        edge: Vec<usize>,
        expected: usize,
        found: usize,
    },
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("vertex {vertex} repeated within edge {edge:?}")]
    RepeatedVertex { vertex: usize, edge: Vec<usize> },
    #[error("duplicate edge {0:?}")]
    DuplicateEdge(Vec<usize>),
    #[error("uniformity mismatch: pattern is {pattern}-uniform, host is {host}-uniform")]
    UniformityMismatch { pattern: usize, host: usize },
    #[error("enumeration too large: C({f},{k}) = {slots} edge slots exceeds {limit}")]
    EnumerationTooLarge {
        k: usize,
        f: usize,
        slots: u64,
        limit: u64,
    },
    #[error("size limit exceeded: {what} is {size}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        size: u128,
        limit: u128,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("colouring is not total: tuple {0:?} has no colour")]
    NotTotal(Vec<usize>),
    #[error("colour {colour} outside 1..={k}")]
    ColourOutOfRange { colour: usize, k: usize },
    #[error("vectors have unequal lengths")]
    UnequalLengths,
    #[error("duplicate vector {0}")]
    DuplicateVector(String),
    #[error("candidate set for {triple:?} has {size} of {class} elements, below the bound {bound}")]
    CandidateTooSmall {
        triple: (usize, usize, usize),
        size: usize,
        class: usize,
        bound: f64,
    },
    #[error("reduced hypergraph is not {mu}-dense: constituent {triple:?} has ratio {ratio}")]
    NotMuDense {
        mu: f64,
        triple: (usize, usize, usize),
        ratio: f64,
    },
    #[error("vertex {index} is not in class {pair:?} of size {size}")]
    ClassMismatch {
        pair: (usize, usize),
        index: usize,
        size: usize,
    },
    #[error("hypergraph is not ternary-embeddable")]
    NotEmbeddable,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// A malformed text input, with the 1-based line where it was detected.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
