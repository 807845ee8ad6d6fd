use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("bad rational literal `{0}`")]
    BadRational(String),
    #[error("unknown series function `{0}`")]
    UnknownFunction(String),
    #[error("unknown algebra `{0}`")]
    UnknownAlgebra(String),
    #[error("bad index {index} (dimension {dim})")]
    BadIndex { index: i64, dim: usize },
    #[error("structure constants are not totally antisymmetric at ({a},{b},{c})")]
    NotTotallyAntisymmetric { a: usize, b: usize, c: usize },
    #[error("Jacobi identity fails at ({a},{b},{c},{d}): residual {residual}")]
    JacobiViolation { a: usize, b: usize, c: usize, d: usize, residual: String },
    #[error("malformed document: {0}")]
    Document(String),
    #[error("tag mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: String, found: String },
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("index {index} out of range (dimension {dim})")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("parse error at position {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
    #[error("skew matrix is singular")]
    SingularS,
    #[error("odd dimension {0}")]
    OddDimension(usize),
    #[error("exact exponential requested for a non-nilpotent element")]
    NotNilpotent,
    #[error("truncation order too low: need {needed}, have {available}")]
    TruncationTooLow { needed: usize, available: usize },
    #[error("element is not invariant: {0}")]
    NotInvariant(String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
