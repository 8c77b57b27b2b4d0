use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("entries from different fields cannot be combined")]
    MixedField,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degree overflow: degree {degree} exceeds ambient dimension {n}")]
    DegreeOverflow { degree: usize, n: usize },

    #[error("the zero vector is not allowed here")]
    ZeroVector,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("matrix has rank {found}, expected {expected}")]
    RankDeficient { expected: usize, found: usize },

    #[error("sections do not generate the fibre at {0}")]
    NotGloballyGenerated(String),

    #[error("functional lies in the annihilator of the determinant image")]
    Indeterminacy,

    #[error("the determinant divisor is identically zero")]
    IdenticallyZero,

    #[error("json: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Json(err.to_string())
    }
}
