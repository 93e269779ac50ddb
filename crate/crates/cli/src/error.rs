use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Usage(String),

    #[error("resource limit: {0}")]
    Resource(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed run record: {0}")]
    Record(String),
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Resource(_) => 3,
            CliError::Io(_) | CliError::Record(_) => 1,
        }
    }
}

impl From<charsum_core::Error> for CliError {
    fn from(e: charsum_core::Error) -> Self {
        use charsum_core::Error as E;
        match e {
            E::TableTooLarge { .. } | E::SupportTooLarge { .. } | E::TooManyWindowPrimes(_) => {
                CliError::Resource(e.to_string())
            }
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Record(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Record(e.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
