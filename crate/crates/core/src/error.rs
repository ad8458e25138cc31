use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum NflError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("Schmidt rank {r} out of range for {d_x}x{d_r} system")]
    RankOutOfRange { r: usize, d_x: usize, d_r: usize },

    #[error("orthonormal training set needs r*t = {needed} orthonormal vectors but d = {d}")]
    OrthonormalOverflow { needed: usize, d: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("matrix is not unitary: max deviation {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not Hermitian: max deviation {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("invalid arguments: {0}")]
    InvalidArgs(String),

    #[error("degenerate split: t = {t} leaves no unknown columns for d = {d}")]
    DegenerateSplit { d: usize, t: usize },

    #[error("invalid config field `{field}`: {reason}")]
    ConfigInvalid { field: String, reason: String },

    #[error("linear algebra failure: {0}")]
    Numerical(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, NflError>;

impl NflError {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        NflError::ConfigInvalid {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
