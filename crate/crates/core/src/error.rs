use crate::series::Space;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("space mismatch: {left:?} vs {right:?}")]
    SpaceMismatch { left: Space, right: Space },

    #[error("Gram solve failed at ridge {ridge:e}: {reason}")]
    SolverFailure { ridge: f64, reason: String },

    #[error("inverse selection rule did not stabilize (window drift {drift:e})")]
    SelectionUnstable { drift: f64 },

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("malformed data: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
