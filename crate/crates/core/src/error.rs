use thiserror::Error;

use crate::index_set::IndexSet;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The space document does not parse or has the wrong shape.
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },

    #[error("duplicate multiset {{{i},{j},{k}}} at {path}")]
    DuplicateMultiset {
        path: String,
        i: usize,
        j: usize,
        k: usize,
    },

    #[error("negative structure constant at {path}: {value}")]
    NegativeConstant { path: String, value: f64 },

    #[error("invalid value at {path}: {message}")]
    InvalidValue { path: String, message: String },

    #[error("total dimension {total} is below 3")]
    TotalDimensionTooSmall { total: u64 },

    #[error("unknown built-in space {0:?}")]
    UnknownSpace(String),

    #[error("expected {expected} coefficients, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{what}[{index}] = {value} is not strictly positive and finite")]
    NotPositive {
        what: &'static str,
        index: usize,
        value: f64,
    },

    #[error("index set is empty")]
    EmptyIndexSet,

    #[error("index set {set} does not fit into {s} summands")]
    IndexOutOfRange { set: IndexSet, s: usize },

    #[error("{0} is not closed under the bracket")]
    NotClosed(IndexSet),

    #[error("{s} summands exceed the exhaustive enumeration limit of {limit}")]
    TooManySummands { s: usize, limit: usize },

    #[error("the isotropy algebra is maximal: no proper intermediate subalgebra exists")]
    NoIntermediateSubalgebra,

    #[error("optimizer failure on {set}: {message}")]
    Optimizer { set: IndexSet, message: String },

    #[error("numerical overflow while evaluating {0}")]
    Overflow(&'static str),

    #[error("curve parameter t = {t} must exceed the pole {pole}")]
    BelowPole { t: f64, pole: f64 },

    #[error("slice point has trace {trace}, expected 1")]
    OffSlice { trace: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for failures of the numerical machinery, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Optimizer { .. } | Error::Overflow(_))
    }
}
