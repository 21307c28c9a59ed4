use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("point {point} does not belong to the {model} model")]
    ModelMismatch { model: String, point: String },

    #[error("operation `{op}` is not supported on the {model} model")]
    Unsupported { op: &'static str, model: String },

    #[error("point {0} is not on the geodesic")]
    NotOnGeodesic(String),

    #[error("boundary point is only known to depth {known}, depth {needed} is required")]
    Unresolved { known: usize, needed: usize },

    #[error("invalid step distribution: {0}")]
    InvalidDistribution(String),

    #[error("step distribution is elementary: {0}")]
    Elementary(String),

    #[error("shift by {shift} exceeds path length {len}")]
    ShiftTooLong { shift: usize, len: usize },

    #[error("enumeration budget of {budget} words exceeded")]
    BudgetExceeded { budget: usize },

    #[error("invalid boundary data: {0}")]
    InvalidBoundary(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
