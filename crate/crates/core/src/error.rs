use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseRationalError {
    #[error("malformed fraction {0:?}")]
    Malformed(String),
    #[error("zero denominator")]
    ZeroDenominator,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
    #[error("json line {line} column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("more than {0} paths; raise the path cap")]
    PathExplosion(usize),
    #[error("search budget of {0} expansions exhausted")]
    SearchBudgetExceeded(u64),
    #[error("edge set is not a Steiner forest: {0}")]
    NotAForest(String),
    #[error("shares are not budget balanced on edge {0}")]
    NotBudgetBalanced(String),
    #[error("shares are infeasible for LP(F)")]
    InfeasibleShares,
    #[error("order positions ({j}, {i}) are not a middle pair with j < i")]
    IndexOutOfSegment { j: usize, i: usize },
    #[error("no enforceable forest exists")]
    NoEnforceableForest,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

impl Error {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
