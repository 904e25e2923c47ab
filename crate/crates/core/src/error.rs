use thiserror::Error;

use crate::degree::MultiDegree;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("scalar {value:?} is not an element of {field}")]
    BadScalar { value: String, field: String },

    #[error("division by zero")]
    DivisionByZero,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("unbound variable {0}")]
    UnboundVariable(String),

    #[error("degree {degree} of {what} is not below g = {g}")]
    PresentationExceedsG {
        what: String,
        degree: MultiDegree,
        g: MultiDegree,
    },

    #[error("relation {index} is not homogeneous: {detail}")]
    Inhomogeneous { index: usize, detail: String },

    #[error("degree {degree} is outside the computed box [0, {bound}]")]
    OutOfRange {
        degree: MultiDegree,
        bound: MultiDegree,
    },

    #[error("intervals do not partition the truncated Hilbert series: {0}")]
    PartitionMismatch(String),

    #[error("not a g-determined Hilbert decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("check mode error: {0}")]
    Mode(String),

    #[error("resource limit exceeded: {0}")]
    Resource(String),

    #[error("no witness: {0}")]
    NoWitness(String),

    #[error("{file}: {message}")]
    Parse { file: String, message: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(file: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            file: file.into(),
            message: message.into(),
        }
    }
}
