use thiserror::Error;

use crate::partition::Bipartition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid bipartition text {text:?}: {reason}")]
    Parse { text: String, reason: String },

    #[error("parts must be weakly decreasing, got {0:?}")]
    NotDecreasing(Vec<usize>),

    #[error("modulus must be at least 2, got {0}")]
    BadModulus(i64),

    #[error("residue {value} is out of range for e = {modulus}")]
    BadResidue { value: i64, modulus: i64 },

    #[error("cannot compare a node with itself: {0}")]
    SameNode(String),

    #[error("nodes {0} and {1} are not ordered by {2}")]
    Incomparable(String, String, String),

    #[error("charge ({s0},{s1}) is outside the admissible window {window}")]
    ChargeWindow { s0: i64, s1: i64, window: &'static str },

    #[error("padding m = {m} is too small; need m > {bound}")]
    PaddingTooSmall { m: i64, bound: i64 },

    #[error("malformed symbol: {0}")]
    MalformedSymbol(String),

    #[error("symbol is not standard (top row exceeds bottom row at index {index})")]
    NotStandard { index: usize },

    #[error("{0} is not in the image of the symbol map")]
    NotInImage(Bipartition),

    #[error("{bipartition} is not a vertex of the crystal of {order}")]
    NotMember { bipartition: Bipartition, order: String },

    #[error("charges {source_charge} and {target} are not congruent modulo {e}")]
    Incongruent { source_charge: String, target: String, e: i64 },

    #[error("plan does not apply: {0}")]
    BadPlan(String),

    #[error("orders {0} and {1} do not label isomorphic crystals")]
    NotIsomorphic(String, String),

    #[error("{pairs} pairs would give 2^{pairs} terms; the limit is {limit}")]
    TooManyPairs { pairs: usize, limit: usize },

    #[error("{0} does not satisfy the dominance condition for this charge")]
    NotSlInfinityMember(Bipartition),

    #[error("the maximal degree {degree} is attained {count} times")]
    NonUniqueMaximum { degree: usize, count: usize },

    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: i64 },

    #[error("l = {0} is odd; only even l is supported")]
    OddL(i64),

    #[error("e = l / gcd(l, a) equals 1")]
    TrivialE,

    #[error("a*d = b - l/2 has no solution modulo {l}")]
    NoSolution { l: i64 },

    #[error("(b - a*d) / (a*e) = {quotient} is an integer; the parameters lie on a wall")]
    OnWall { quotient: i64 },

    #[error("invalid json: {0}")]
    Json(String),

    #[error("invalid crystal graph: {0}")]
    InvalidGraph(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
