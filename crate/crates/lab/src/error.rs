use thiserror::Error;

/// Exit status for a trajectory truncated by a blow-up.
pub const EXIT_BLOW_UP: i32 = 3;
/// Exit status for an invalid configuration.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for any other failure.
pub const EXIT_FAILURE: i32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {field}: {message}")]
    Config { field: String, message: String },
    #[error("invalid configuration: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("snapshot: {0}")]
    Snapshot(String),
    #[error(transparent)]
    Core(#[from] kgsl::LabError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Toml(_) => EXIT_CONFIG,
            _ => EXIT_FAILURE,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
