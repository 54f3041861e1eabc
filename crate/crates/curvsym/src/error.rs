//! Error types for tensor structure, chart evaluation, and serialization.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TensorError {
    #[error("expected {expected} entries for dim {dim} rank {rank}, got {got}")]
    EntryCount {
        dim: usize,
        rank: usize,
        expected: usize,
        got: usize,
    },
    #[error("dimension {0} outside supported range 2..=8")]
    DimOutOfRange(usize),
    #[error("rank {0} outside supported range 1..=5")]
    RankOutOfRange(usize),
    #[error("permutation on {perm} slots applied to rank-{rank} tensor")]
    PermutationRankMismatch { perm: usize, rank: usize },
    #[error("image array {0:?} is not a permutation of its slots")]
    NotAPermutation(Vec<usize>),
    #[error("operands disagree in shape: dim {dim_a} rank {rank_a} vs dim {dim_b} rank {rank_b}")]
    ShapeMismatch {
        dim_a: usize,
        rank_a: usize,
        dim_b: usize,
        rank_b: usize,
    },
    #[error("linear combination of an empty tensor list")]
    EmptyCombination,
    #[error("coefficient list length {coeffs} does not match tensor list length {tensors}")]
    CombinationLength { coeffs: usize, tensors: usize },
    #[error("operation requires rank {expected}, got rank {got}")]
    RankMismatch { expected: usize, got: usize },
    #[error("vector length {got} does not match tensor dimension {expected}")]
    VectorDimMismatch { expected: usize, got: usize },
    #[error("symmetry class dimension {0} outside supported range 2..=6")]
    ClassDimOutOfRange(usize),
}

#[derive(Debug, Error, PartialEq)]
pub enum ChartError {
    #[error("unknown metric '{0}'")]
    UnknownMetric(String),
    #[error("invalid parameter for metric '{metric}': {reason}")]
    InvalidParam { metric: String, reason: String },
    #[error("point {point:?} outside chart validity box (need margin {margin})")]
    OutsideChart { point: Vec<f64>, margin: f64 },
    #[error("metric degenerate at {point:?}: |det g| = {det:e} below threshold {threshold:e}")]
    DegenerateMetric {
        point: Vec<f64>,
        det: f64,
        threshold: f64,
    },
}

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("malformed rational '{0}' (expected p/q in integers, q != 0)")]
    BadRational(String),
    #[error("json error at line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("tensor record invalid: {0}")]
    BadTensorRecord(String),
    #[error("operator record invalid: {0}")]
    BadOperatorRecord(String),
    #[error("golden file invalid: {0}")]
    BadGolden(String),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        ParseError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}
