use std::io;
use std::path::{Path, PathBuf};

/// Everything that ends a `tonal` invocation early. Each variant owns one
/// exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Codec(tonal_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },

    #[error("{0}")]
    Stream(io::Error),

    #[error("selftest failed: {failed} of {total} checks")]
    SelftestFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) | CliError::SelftestFailed { .. } => 2,
            CliError::Codec(tonal_core::Error::Io(_)) => 3,
            CliError::Codec(_) => 2,
            CliError::Io { .. } | CliError::Stream(_) => 3,
        }
    }

    pub fn io(path: &Path, source: io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

impl From<tonal_core::Error> for CliError {
    fn from(e: tonal_core::Error) -> Self {
        CliError::Codec(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Stream(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(e) => CliError::Stream(e),
            other => CliError::Data(format!("csv: {other:?}")),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
