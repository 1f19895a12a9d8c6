use j1j2_core::Error as CoreError;
use thiserror::Error;

/// Exit status for a successful run.
pub const EXIT_OK: i32 = 0;
/// Exit status for numerical failures and I/O errors.
pub const EXIT_NUMERICAL: i32 = 1;
/// Exit status for invalid command lines and parameters.
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) | CliError::Io(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::SingularAnisotropy(_)
            | CoreError::SiteOutOfRange { .. }
            | CoreError::OddSiteCount(_)
            | CoreError::TooFewSites { .. }
            | CoreError::InvalidParams(_)
            | CoreError::ResonantInhomogeneity(_)
            | CoreError::ParametrizationMismatch { .. }
            | CoreError::DimensionTooLarge { .. } => CliError::Usage(e.to_string()),
            CoreError::RootPole { .. }
            | CoreError::RootCollision { .. }
            | CoreError::KernelPole(_)
            | CoreError::NoConvergence(_) => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
