use std::fmt;

use thiserror::Error;

/// Validity rules for proximity forests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Proximate points are earlier points, at most two of them.
    P1,
    /// A satellite point proximate to `j < k` requires `j` in `prox(k)`.
    P2,
    /// A pair `{j, k}` is shared by at most one satellite.
    P4,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::P1 => f.write_str("P1"),
            Rule::P2 => f.write_str("P2"),
            Rule::P4 => f.write_str("P4"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("rule {rule} violated at point {index}: {message}")]
    Rule {
        rule: Rule,
        index: usize,
        message: String,
    },

    #[error("dimension mismatch: expected length {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("divisor is not effective")]
    NotEffective,

    #[error("divisor is not reduced")]
    NotReduced,

    #[error("self-intersection must be negative, got {0}")]
    NonNegativeSelfIntersection(i64),

    #[error("invalid rank {n} for type {family}")]
    InvalidRank { family: char, n: usize },

    #[error("unknown singularity type `{0}`")]
    UnknownType(String),

    #[error("number of blow-ups must be non-negative, got {0}")]
    NegativeBlowups(i64),

    #[error("invalid configuration: {0}")]
    InvalidConfiguration(String),

    #[error("point count {s} outside 1..={cap}")]
    CapExceeded { s: usize, cap: usize },

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
