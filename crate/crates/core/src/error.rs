use thiserror::Error;

/// Errors raised by the library. Verification failures (a relation or
/// invariance that does not hold) are reported through result values, not
/// through this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("denominator divisible by 41 cannot be reduced")]
    DenominatorDivisibleBy41,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("order exceeds cap {0}")]
    OrderExceedsCap(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unbound generator name `{0}`")]
    UnboundName(String),
    #[error("matrix is not monomial (row {0})")]
    NotMonomial(usize),
    #[error("scalar product on triple {0} is not +1 or -1")]
    NonRealSign(String),
    #[error("sign conflict on triple {0}")]
    SignConflict(String),
    #[error("orbit exceeds cap {0}")]
    OrbitCapExceeded(usize),
    #[error("orbit is not closed under generator {0}")]
    OrbitNotClosed(usize),
    #[error("vector is not an eigenvector of the matrix")]
    NotAnEigenvector,
    #[error("expected a one-dimensional solution space, found dimension {0}")]
    DimensionNotOne(usize),
    #[error("subgroup exceeds cap {0}")]
    SubgroupCapExceeded(usize),
    #[error("expected {expected} basis columns, found {found}")]
    WrongCount { expected: usize, found: usize },
    #[error("interaction block pattern violated: {0}")]
    PatternViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
