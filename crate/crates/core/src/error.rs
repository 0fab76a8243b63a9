use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("operator is not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("operator is not unipotent: {0}")]
    NotUnipotent(String),
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(String),
    #[error("modulus {ell} is smaller than the dimension {dim}; truncated log/exp need ℓ ≥ n")]
    ModulusTooSmall { ell: u64, dim: usize },
    #[error("polynomial is not monic: {0}")]
    NotMonic(String),
    #[error("polynomials are not relatively prime (common factor {0})")]
    NotRelativelyPrime(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not of weight {w}: {reason}")]
    NotOfWeight { w: u32, reason: String },
    #[error("invalid descriptor: {0}")]
    Descriptor(String),
    /// An internal cross-check between two independent routes disagreed.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

impl Error {
    pub fn shape(msg: impl Into<String>) -> Self {
        Error::Shape(msg.into())
    }

    pub fn descriptor(msg: impl Into<String>) -> Self {
        Error::Descriptor(msg.into())
    }

    pub fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }
}
