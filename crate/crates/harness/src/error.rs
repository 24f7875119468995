use thiserror::Error;

/// A config field that failed validation, addressed by its JSON path.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {reason}")]
pub struct ConfigError {
    pub field: String,
    pub reason: String,
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid config: {0}")]
    Config(#[from] ConfigError),

    #[error("cannot parse config: {0}")]
    Parse(String),

    #[error("{0}: {1}")]
    Io(String, String),

    #[error("dataset: {0}")]
    Dataset(String),

    #[error(transparent)]
    Library(#[from] redaction::error::Error),
}

pub type Result<T> = std::result::Result<T, HarnessError>;
