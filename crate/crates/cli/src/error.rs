use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {message}", path.display())]
    Parse { path: PathBuf, message: String },

    #[error(transparent)]
    Numeric(#[from] qdecouple_core::Error),

    #[error("bound violated: {0}")]
    BoundViolation(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl CliError {
    pub fn parse(path: &std::path::Path, message: impl ToString) -> Self {
        CliError::Parse {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }

    pub fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Usage(_) | CliError::Io { .. } | CliError::Parse { .. } => 2,
            CliError::Numeric(_) => 3,
            CliError::BoundViolation(_) => 4,
            CliError::VerificationFailed(_) => 5,
        })
    }
}

pub type CliResult<T> = Result<T, CliError>;
