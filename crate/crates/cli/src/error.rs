use std::path::PathBuf;

use sce_core::SceError;

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Failure classes, each with its own process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("input: {0}")]
    Input(#[source] SceError),
    #[error("{method} failed: {source}")]
    Method {
        method: String,
        #[source]
        source: SceError,
    },
    #[error("output {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub const USAGE: i32 = 2;
    pub const INPUT: i32 = 3;
    pub const FAILURE: i32 = 4;

    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => Self::USAGE,
            Self::Input(_) => Self::INPUT,
            Self::Method { .. } | Self::Output { .. } => Self::FAILURE,
        }
    }

    pub(crate) fn method(method: impl Into<String>, source: SceError) -> Self {
        match source {
            SceError::InvalidConfig(m) => Self::Usage(m),
            source => Self::Method {
                method: method.into(),
                source,
            },
        }
    }

    pub(crate) fn output(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Self::Output {
            path: path.into(),
            source,
        }
    }
}
