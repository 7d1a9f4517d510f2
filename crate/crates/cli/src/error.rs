use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Clap(#[from] clap::Error),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Model(#[from] esdlab::error::Error),
    #[error("comparison failed: {0}")]
    CompareFailed(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 0 ok, 1 comparison failed, 2 usage, 3 I/O, 4 numeric or truncation.
    pub fn exit_code(&self) -> i32 {
        use esdlab::error::Error as E;
        match self {
            CliError::CompareFailed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Clap(e) => e.exit_code(),
            CliError::Io { .. } => 3,
            CliError::Model(E::InvalidParameter(_) | E::UnsupportedAnalytic(_) | E::InvalidState(_)) => 2,
            CliError::Model(_) => 4,
        }
    }
}
