use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field spec: {0}")]
    InvalidSpec(String),
    #[error("modulus is reducible over F_{p}")]
    ReducibleModulus { p: u32 },
    #[error("modulus has degree {found}, expected {expected}")]
    ModulusDegree { expected: u32, found: u32 },
    #[error("field of order {order} exceeds the table limit {limit}")]
    FieldTooLarge { order: u64, limit: u64 },
    #[error("no default modulus available for p = {p}, degree {degree}")]
    NoDefaultModulus { p: u32, degree: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("malformed element token {0:?}")]
    MalformedElement(String),
    #[error("element index {index} out of range for a field of order {order}")]
    ElementOutOfRange { index: u64, order: u32 },
    #[error("expected {expected} coefficients, found {found}")]
    CoeffCount { expected: usize, found: usize },
    #[error("the zero polynomial has no linear set")]
    ZeroPolynomial,
    #[error("inputs are linearly dependent over F_q")]
    DependentInputs,
    #[error("singular matrix")]
    SingularMatrix,
    #[error("polynomial is not scattered")]
    NotScattered,
    #[error("linear set contains {0}; normalize the polynomial first")]
    NotNormalized(&'static str),
    #[error("{what}: search size {size} exceeds guard {limit} (use --force to override)")]
    GuardExceeded { what: &'static str, size: u64, limit: u64 },
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("I/O error: {0}")]
    Io(String),
}
