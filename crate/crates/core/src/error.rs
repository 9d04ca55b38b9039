use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the PWI pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("I/O error: {0}")]
    Write(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),

    #[error("unusable author name {0:?}")]
    UnusableName(String),

    #[error("merge map contains a cycle: {}", .0.join(" -> "))]
    CyclicMergeMap(Vec<String>),

    #[error("merge map maps {variant} to both {first} and {second}")]
    ConflictingMerge {
        variant: String,
        first: String,
        second: String,
    },

    #[error("unknown author {0}")]
    UnknownAuthor(String),

    #[error("author {author} is not listed on paper {paper}")]
    NotOnPaper { author: String, paper: String },

    #[error("input lengths differ ({0} vs {1})")]
    LengthMismatch(usize, usize),

    #[error("too few observations: {0}")]
    TooFewObservations(String),

    #[error("input {0} is constant")]
    ConstantInput(&'static str),

    #[error("input contains a non-finite value")]
    NonFinite,

    #[error("predictor matrix is rank deficient; collinear columns: {}", .0.join(", "))]
    RankDeficient(Vec<String>),

    #[error("invalid thresholds: {0}")]
    Thresholds(String),

    #[error("no authors in common between PWI results and score table")]
    EmptyJoin,

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
