use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field descriptor `{text}`: {reason}")]
    InvalidDescriptor { text: String, reason: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {modulus:?} is reducible over F_{p}")]
    ReducibleModulus { modulus: Vec<u64>, p: u64 },

    #[error("unsupported field parameters: {0}")]
    Unsupported(String),

    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid scalar `{text}` for field {field}")]
    InvalidScalar { text: String, field: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("Plücker coordinate p{indices:?} vanishes")]
    VanishingMinor { indices: Vec<usize> },

    #[error("matrix does not have full rank {0}")]
    RankDeficient(usize),

    #[error(
        "no point with all Plücker coordinates nonzero over {field} after {tries} tries; \
         the field is probably too small for n = {n}"
    )]
    SamplingExhausted { field: String, n: usize, tries: usize },

    #[error("singular elimination for q = {q}, lambda = {lambda} at reduction level {level}")]
    SingularElimination { q: usize, lambda: String, level: usize },

    #[error("structural check failed: {0}")]
    Structural(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}
