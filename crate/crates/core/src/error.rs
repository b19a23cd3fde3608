use thiserror::Error;

/// Errors raised anywhere in the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("malformed rational `{0}`")]
    ParseRational(String),

    #[error("series order bounds differ ({0} vs {1})")]
    OrderMismatch(usize, usize),

    #[error("series order bound must be positive")]
    ZeroOrder,

    #[error("series with zero constant term is not invertible")]
    NotInvertible,

    #[error("log requires constant term 1")]
    LogConstantTerm,

    #[error("exp requires constant term 0")]
    ExpConstantTerm,

    #[error("weight list is empty")]
    EmptyWeights,

    #[error("weights must be positive, got {0}")]
    NonPositiveWeight(i64),

    #[error("genus must be nonnegative, got {0}")]
    NegativeGenus(i64),

    #[error("undefined integrand exponent {exponent} for W-key {key}")]
    UndefinedExponent { key: String, exponent: i64 },

    #[error("W-key {0} is a base case or has nonpositive exponent; nothing to expand")]
    NotExpandable(String),

    #[error("weight not conserved: {parent} -> {child}")]
    WeightNotConserved { parent: String, child: String },

    #[error("invalid query: {0}")]
    InvalidQuery(String),

    #[error("cache line {line}: {reason}")]
    CacheParse { line: usize, reason: String },

    #[error("cache conflict for {key}: {old} vs {new}")]
    CacheConflict {
        key: String,
        old: String,
        new: String,
    },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
