use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field order {0}: expected a prime power in 2..=65536")]
    InvalidFieldOrder(u64),
    #[error("modulus {modulus} is not a monic irreducible polynomial of degree {degree} over GF({p})")]
    InvalidModulus { modulus: u64, degree: u32, p: u32 },
    #[error("inverse of zero in GF({0})")]
    DivisionByZero(u32),
    #[error("zero vector has no projective normalization")]
    ZeroVector,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("{0}")]
    Domain(String),
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
