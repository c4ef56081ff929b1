use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Parse(String),

    #[error(transparent)]
    Domain(#[from] qsu2_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{failed} check(s) failed")]
    VerifyFailed { failed: usize },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 verification failure, 2 bad input, 3 numeric domain, 4 IO.
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::VerifyFailed { .. } => 1,
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io { .. } => 4,
        })
    }
}
