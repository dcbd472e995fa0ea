use thiserror::Error;

use crate::pattern::Condition;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range for {n} indices")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("the condition (∅,∅) is not allowed")]
    EmptyCondition,

    #[error("duplicate condition {0}")]
    DuplicateCondition(Condition),

    #[error("unsupported parameters: {0}")]
    UnsupportedParams(String),

    #[error("expected a reasonable pattern with no inconsistency conditions")]
    NotConsistencyPattern,

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("malformed union map: {0}")]
    MalformedUnionMap(String),

    #[error("synthesized witness does not exhibit the pattern (failing {0:?})")]
    WitnessVerificationFailure(Vec<Condition>),

    #[error("{what} = {value} exceeds the configured bound {limit}")]
    BoundExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("pattern is not fully complete")]
    NotFullyComplete,

    #[error("pattern is not reasonable and positive")]
    NotReasonablePositive,

    #[error("family violates the intersection characterization: {0}")]
    CharacterizationPropertyViolated(String),

    #[error("precondition failed: {0}")]
    PreconditionFailure(String),

    #[error("construction failed self-verification: {0}")]
    VerificationFailure(String),

    #[error("axiom violation: {0}")]
    AxiomViolation(String),

    #[error("not an embedding: {0}")]
    NotAnEmbedding(String),

    #[error("triangle found on vertices {0:?}")]
    TriangleFound([usize; 3]),

    #[error("malformed input: {0}")]
    Malformed(String),
}
