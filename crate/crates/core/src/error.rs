use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not an odd prime below 2^31")]
    NotPrime(u64),

    #[error("parse error in {input:?}: {message}")]
    Parse { input: String, message: String },

    #[error("invalid Grassmannian Gr({k},{m}): need 1 <= k <= m-1")]
    InvalidBox { k: usize, m: usize },

    #[error("partition {partition} does not fit the {rows}x{cols} box")]
    DoesNotFit { partition: String, rows: usize, cols: usize },

    #[error("{mu} is not contained in {lambda}")]
    Containment { lambda: String, mu: String },

    #[error("codimension sum {actual} differs from dim Gr = {expected}")]
    Codimension { expected: usize, actual: usize },

    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,

    #[error("polynomial is not squarefree")]
    NotSquarefree,

    #[error("group of order {order} exceeds the enumeration budget {limit}")]
    BudgetExceeded { order: u128, limit: u128 },

    #[error("flags are degenerate: condition {condition} imposes no equations")]
    DegenerateFlags { condition: String },

    #[error("flag {index} must be the {expected} flag for these coordinates")]
    FlagPosition { index: usize, expected: &'static str },

    #[error("conditions {lambda} and {mu} on opposite flags have no common point")]
    EmptyIntersection { lambda: String, mu: String },

    #[error("flag count {flags} does not match condition count {conditions}")]
    FlagCount { flags: usize, conditions: usize },

    #[error("{0} coordinates exceed the supported number of variables")]
    TooManyVariables(usize),

    #[error("auxiliary problem {0} is not a known base case")]
    UnresolvedAuxiliary(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn parse(input: &str, message: impl Into<String>) -> Self {
        Error::Parse { input: input.to_string(), message: message.into() }
    }
}
