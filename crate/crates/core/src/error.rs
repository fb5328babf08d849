use thiserror::Error;

/// Errors raised by the solvers and the arithmetic underneath them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    DescriptorMismatch,
    #[error("field is infinite")]
    InfiniteField,
    #[error("polynomial is reducible: {0}")]
    ReduciblePolynomial(String),
    #[error("unsupported base field for an extension: {0}")]
    UnsupportedBase(String),
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("matrix is not square")]
    NonSquare,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is singular")]
    Singular,
    #[error("matrices are not similar")]
    NotSimilar,
    #[error("characteristic polynomial is not separable")]
    InseparableCharPoly,
    #[error("factorization unavailable: {0}")]
    FactorizationUnavailable(String),
    #[error("matrix is not nilpotent")]
    NotNilpotent,
    #[error("unhandled shape: {0}")]
    UnhandledShape(String),
    #[error("target has nonzero trace")]
    NonzeroTrace,
    #[error("no commutator witness found")]
    WitnessNotFound,
    #[error("partition too small: {0}")]
    PartitionTooSmall(String),
    #[error("size too small: {0}")]
    SizeTooSmall(String),
    #[error("leading coordinate of the given border vector is zero")]
    ZeroLeadingCoordinate,
    #[error("characteristic polynomial mismatch: {0}")]
    CharPolyMismatch(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for outcomes that are mathematically meaningful negatives rather
    /// than malformed input or internal failures.
    pub fn is_negative_result(&self) -> bool {
        matches!(
            self,
            Error::NotFound(_)
                | Error::Unsupported(_)
                | Error::NonzeroTrace
                | Error::WitnessNotFound
                | Error::NotSimilar
                | Error::PartitionTooSmall(_)
                | Error::SizeTooSmall(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
