use thiserror::Error;

use crate::numthy::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix shape mismatch: {0}")]
    DimensionMismatch(String),
    #[error("{0} is odd where an even exponent sum or weight is required")]
    OddWeight(i64),
    #[error("eta-quotient {0} fails the Gordon-Hughes-Newman congruences")]
    NotGhn(String),
    #[error("{d} does not divide the level {level}")]
    NotDivisor { d: u64, level: u64 },
    #[error("orders sum to {actual} but weight {weight} at level {level} requires {expected}")]
    InconsistentWeight {
        level: u64,
        weight: i64,
        actual: Rational,
        expected: Rational,
    },
    #[error("level {0} is not square-free")]
    NotSquareFree(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prefactor exponent {0}/24 is not an integer")]
    FractionalLeadingPower(i64),
    #[error("prime {0} is not supported here (need p >= 5)")]
    UnsupportedPrime(u64),
    #[error("table cell (k = {k}, p = {p}) evaluates to the non-integer {value}")]
    TableInconsistency { p: u64, k: i64, value: Rational },
    #[error("weight {k} is not admissible at level {p}")]
    Inadmissible { p: u64, k: i64 },
    #[error("the comparison space has dimension zero")]
    ZeroDimension,
    #[error("quotient {quotient} has weight {found:?}, expected {expected}")]
    WeightMismatch {
        quotient: String,
        expected: i64,
        found: Option<i64>,
    },
    #[error("orders already correspond to an integral eta-quotient")]
    AlreadyIntegral,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
