use thiserror::Error;

/// Errors raised by the library. Every operation is exact, so there are no
/// numerical-tolerance failures: an error always means the input violated a
/// structural precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("element is the bottom element")]
    EmptyElement,
    #[error("every atom is null; the quotient algebra would be degenerate")]
    DegenerateQuotient,
    #[error("flavor mismatch: {0}")]
    FlavorMismatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("objects live over different Boolean algebras")]
    AlgebraMismatch,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("not a cosheaf: {0}")]
    NotACosheaf(String),
    #[error("support violation: {0}")]
    SupportError(String),
    #[error("linear system is singular or inconsistent: {0}")]
    Singular(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("maps are not mutually inverse: {0}")]
    NotInverse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
