use thiserror::Error;

use crate::slope::Slope;

/// Crate-wide error type.
///
/// The CLI maps these onto exit codes: usage-class errors (bad slopes,
/// unknown knots, malformed input) exit 1, incomplete records exit 2,
/// contradictions and detected violations exit 3.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid slope: {0}")]
    InvalidSlope(String),
    #[error("slope {0} is an integer; Farey parents need denominator >= 2")]
    IntegerSlope(Slope),
    #[error("{0}")]
    Domain(String),
    #[error("record '{knot}' is missing {missing}")]
    IncompleteRecord { knot: String, missing: String },
    #[error("nontrivial bundle class is not admissible on slope {0}: the numerator is odd")]
    InvalidBundle(Slope),
    #[error("surgery along {0} is not an F2-homology sphere (even numerator)")]
    NotF2HomologySphere(Slope),
    #[error("the dimension over C at slope {0} is ambiguous (zero surgery with nu# = 0)")]
    AmbiguousDimension(Slope),
    #[error("unknown knot '{0}'")]
    UnknownKnot(String),
    #[error("contradiction: {0}")]
    Contradiction(String),
    #[error("database: {0}")]
    Db(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("infeasible cobordism data: {0}")]
    InfeasibleGeometry(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
