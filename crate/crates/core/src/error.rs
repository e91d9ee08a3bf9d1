use thiserror::Error;

pub type Result<T, E = QgError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QgError {
    /// A table or factor map failed shape or range validation.
    #[error("construction error at {location}: {message}")]
    Construction { location: String, message: String },

    /// An operation needed a division that the structure does not have.
    #[error("axiom violation: {0}")]
    AxiomViolation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("search exhausted: {0}")]
    SearchExhausted(String),

    /// A guaranteed property failed after construction. Either the input
    /// slipped past validation or there is a bug.
    #[error("internal consistency error: {0}")]
    Internal(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl QgError {
    pub(crate) fn cell(row: usize, col: usize, message: impl Into<String>) -> Self {
        QgError::Construction {
            location: format!("cell ({row}, {col})"),
            message: message.into(),
        }
    }

    pub(crate) fn shape(location: impl Into<String>, message: impl Into<String>) -> Self {
        QgError::Construction {
            location: location.into(),
            message: message.into(),
        }
    }

    /// Process exit status used by the command line.
    pub fn exit_code(&self) -> i32 {
        match self {
            QgError::Internal(_) => 1,
            QgError::Capacity(_) | QgError::SearchExhausted(_) => 3,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for QgError {
    fn from(e: std::io::Error) -> Self {
        QgError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for QgError {
    fn from(e: serde_json::Error) -> Self {
        QgError::Parse(e.to_string())
    }
}
