//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by construction and arithmetic across the crate.
///
/// Exactness is contract: anything that would silently lose it (mode mixing,
/// divergent sums, undecidable comparisons) surfaces here instead.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("scalar mode mismatch: {left} vs {right}")]
    ModeMismatch { left: &'static str, right: &'static str },

    #[error("index-origin mismatch: base {left} vs base {right}")]
    BaseMismatch { left: usize, right: usize },

    #[error("index {index} below sequence base {base}")]
    IndexBelowBase { index: usize, base: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("metric argument must be nonzero")]
    ZeroArgument,

    #[error("sequence entry must be nonzero at index {0}")]
    ZeroEntry(usize),

    #[error("sequence entry must be positive at index {0}")]
    NonPositiveEntry(usize),

    #[error("invalid tail: {0}")]
    InvalidTail(String),

    #[error("sequence is not absolutely summable: {0}")]
    NotSummable(String),

    #[error("weighted sum diverges: {0}")]
    DivergentSum(String),

    #[error("total mass is {0}, expected exactly 1")]
    MassNotOne(String),

    #[error("expectation is {0}, expected exactly 1")]
    ExpectationNotOne(String),

    #[error("density anchored to a different measure")]
    AnchorMismatch,

    #[error("element does not belong to this context: {0}")]
    ContextMismatch(String),

    #[error("equality on floats requires an explicit tolerance")]
    FloatEquality,

    #[error("enclosure too wide to decide at the requested tolerance (width {0})")]
    ToleranceExhausted(String),

    #[error("subdivision budget of {0} boxes exhausted")]
    SubdivisionBudget(usize),

    #[error("move ladder is empty for the given neighborhood radius")]
    EmptyLadder,

    #[error("probe grid is empty")]
    EmptyGrid,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
