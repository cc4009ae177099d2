use thiserror::Error;

use crate::kltables::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LaurentError {
    #[error("division by zero: polynomial has negative exponents and was evaluated at 0")]
    DivisionByZero,
    #[error("malformed r-polynomial: exponent {exponent} is incompatible with degree {degree}")]
    MalformedRPoly { exponent: i32, degree: i32 },
    #[error("cannot parse polynomial {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoxeterError {
    #[error("unknown Cartan type {0:?}")]
    UnknownType(String),
    #[error("illegal rank {rank} for type {family}")]
    IllegalRank { family: char, rank: usize },
    #[error("elements belong to different Coxeter systems")]
    MixedSystems,
    #[error("generator index {index} out of range for rank {rank}")]
    BadGenerator { index: usize, rank: usize },
    #[error("cannot parse word {0:?}")]
    BadWord(String),
    #[error("group of type {cartan} has order {order}, above the enumeration limit {limit}")]
    TooLarge { cartan: String, order: u128, limit: u128 },
}

#[derive(Debug, Error)]
pub enum TableError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("table is for type {found}, expected {expected}")]
    TypeMismatch { expected: String, found: String },
    #[error("table violates {} invariant(s); first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
    #[error("no ell = {ell} table loaded for dual type {dual}")]
    MissingDual { dual: String, ell: u32 },
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}

#[derive(Debug, Error)]
pub enum MultiplicityError {
    #[error("Richardson variety is empty: {z} is not below {x} in Bruhat order")]
    EmptyVariety { z: String, x: String },
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Table(#[from] TableError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field size {0} is beyond the supported table size")]
    FieldTooLarge(u64),
    #[error("n = {n}, q = {q} is outside the desk-scale guard (n <= 4, q in {{2,3,4,5}}); set KLR_GUARD_OFF=1 to override")]
    Guard { n: usize, q: u64 },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("n must be at least 2, got {0}")]
    BadDimension(usize),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
}
