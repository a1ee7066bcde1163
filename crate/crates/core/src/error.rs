use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("index {index} out of range for {n} elements")]
    Index { index: usize, n: usize },
    #[error("cover relation contains a cycle through element {0}")]
    Cycle(usize),
    #[error("incidence functions live on different posets")]
    Mismatch,
    #[error("size {n} exceeds the configured bound {bound}")]
    Size { n: usize, bound: usize },
    #[error("duplicate element {0}")]
    Duplicate(String),
    #[error("element {0} is not a positive integer")]
    NonPositive(String),
    #[error("valuation evaluates to zero at {0}")]
    ZeroValue(String),
    #[error("valuation is not defined at {0}")]
    Undefined(String),
    #[error("semimultiplicativity fails at the pair ({0}, {1})")]
    NotSemimultiplicative(String, String),
    #[error("set is not meet closed: meet of {0} and {1} is missing")]
    NotMeetClosed(String, String),
    #[error("shape error: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("denominator of the join-form condition vanishes")]
    ZeroDenominator,
    #[error("unknown catalog label {0:?}")]
    UnknownLabel(String),
    #[error("invalid parameters: {0}")]
    Param(String),
    #[error("could not build a gcd-closed set of size {n} below {bound}")]
    Exhaustion { n: usize, bound: String },
    #[error("parse error: {0}")]
    Parse(String),
}
