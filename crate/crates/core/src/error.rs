use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("exponent must satisfy 1 <= p <= inf, got {0}")]
    InvalidExponent(f64),

    #[error("operation needs a nonzero sequence")]
    ZeroSequence,

    #[error("operation needs a nonzero vector")]
    ZeroVector,

    #[error("tail criterion requires a finite exponent")]
    InfiniteExponent,

    #[error("exponent {0} outside the open range (1, inf) required here")]
    ExponentOutOfRange(f64),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator sequence has no terms")]
    EmptySequence,

    #[error("family must have at least one member")]
    EmptyFamily,

    #[error("unknown grid point `{0}`")]
    UnknownPoint(String),

    #[error("grid is invalid: {0}")]
    InvalidGrid(String),

    #[error("no cutoff below the horizon {horizon} brings the tail under epsilon = {epsilon}")]
    NoCertificate { epsilon: f64, horizon: usize },

    #[error("epsilon must be positive and finite, got {0}")]
    InvalidEpsilon(f64),
}

impl Error {
    pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
        if expected == found {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected, found })
        }
    }

    pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
        if epsilon > 0.0 && epsilon.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidEpsilon(epsilon))
        }
    }
}
