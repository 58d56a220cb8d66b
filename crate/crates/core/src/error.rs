use thiserror::Error;

/// Errors raised by the automata, presentation and analysis layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("malformed convolution: tape {tape} reads a symbol after padding at position {position}")]
    MalformedConvolution { tape: usize, position: usize },
    #[error("arity mismatch: expected {expected} tapes, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },
    #[error("invalid tape index {index} for a {tapes}-tape automaton")]
    InvalidTape { index: usize, tapes: usize },
    #[error("invalid label {label} (presentation has {labels} labels)")]
    InvalidLabel { label: usize, labels: usize },
    #[error("word {0:?} is not in the domain")]
    NotInDomain(String),
    #[error("relation is not functional at input {input:?}: {first:?} and {second:?}")]
    FunctionalityViolation {
        input: String,
        first: String,
        second: String,
    },
    #[error("length difference is unbounded: a padding cycle on the input tape is reachable")]
    NotBounded,
    #[error("invalid presentation: {0}")]
    InvalidPresentation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("not found within budget: {0}")]
    NotFound(String),
    #[error("word length unknown: element lies beyond radius cap {0}")]
    UnknownLength(usize),
    #[error("insufficient data: need at least {needed} terms, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
