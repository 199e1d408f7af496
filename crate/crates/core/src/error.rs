use thiserror::Error;

use crate::word::Word;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("letter {letter} is not in an alphabet of size {size}")]
    AlphabetMismatch { letter: u8, size: usize },

    #[error("word of degree {degree} exceeds the declared bound {bound}")]
    DegreeBound { degree: usize, bound: usize },

    #[error("functional has no value at word {0}")]
    Undefined(Word),

    #[error("unknown model `{0}` (expected gaussian, semicircle, bernoulli or arcsine)")]
    UnknownModel(String),

    #[error("partition is not noncrossing")]
    NotNoncrossing,

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("size {n} exceeds the enumeration bound {bound}")]
    BoundExceeded { n: usize, bound: usize },

    #[error("expected a {expected} cumulant functional, got {got}")]
    KindMismatch { expected: String, got: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("distribution is not stochastic: {0}")]
    NotStochastic(String),

    #[error("state vector is not normalized (norm {0})")]
    NonUnitState(f64),

    #[error("state does not vanish on degree-one elements")]
    StateNotCentered,

    #[error("spectrum is not rational")]
    IrrationalSpectrum,

    #[error("parse error: {0}")]
    Parse(String),
}
