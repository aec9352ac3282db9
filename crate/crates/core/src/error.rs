use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("map is not well defined: {0}")]
    IllDefined(String),
    #[error("not a complex: d^{} composed with d^{degree} is nonzero", degree + 1)]
    NotAComplex { degree: i64 },
    #[error("not a chain map: square at degree {degree} does not commute")]
    NotAChainMap { degree: i64 },
    #[error("degree range violation: {0}")]
    DegreeRange(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("mismatched operands: {0}")]
    Mismatch(String),
    #[error("internal invariant failed: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
