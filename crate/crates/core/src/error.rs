use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("overflow: {0}")]
    Overflow(String),

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("index out of range: {0}")]
    Range(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate weights: {0}")]
    DegenerateWeights(String),

    #[error("invalid atom: {0}")]
    InvalidAtom(AtomViolation),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("malformed input: {0}")]
    Format(String),
}

/// Which p-atom clause a candidate function violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AtomViolation {
    NonzeroMean,
    SupBound,
    SupportLeak,
}

impl std::fmt::Display for AtomViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AtomViolation::NonzeroMean => "integral over the support is not zero",
            AtomViolation::SupBound => "sup norm exceeds mu(I)^(-1/p)",
            AtomViolation::SupportLeak => "nonzero values outside the support coset",
        })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
