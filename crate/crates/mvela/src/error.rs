use std::path::{Path, PathBuf};

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors of the command-line layer. [`Error::exit_code`] separates usage
/// and configuration problems (2) from data and runtime failures (1).
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {}: {source}", path.display())]
    Open { path: PathBuf, source: std::io::Error },
    #[error("{}: {message}", path.display())]
    Config { path: PathBuf, message: String },
    #[error("{}: line {line}: {message}", path.display())]
    Format { path: PathBuf, line: u64, message: String },
    #[error("{}: {message}", path.display())]
    Invalid { path: PathBuf, message: String },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("degenerate portfolio: SBS ERT {sbs} does not exceed VBS ERT {vbs}, gap closure is undefined")]
    DegeneratePortfolio { sbs: f64, vbs: f64 },
    #[error(transparent)]
    Core(mvela_core::Error),
}

impl From<mvela_core::Error> for Error {
    fn from(e: mvela_core::Error) -> Self {
        match e {
            mvela_core::Error::DegeneratePortfolio { sbs, vbs } => Error::DegeneratePortfolio { sbs, vbs },
            other => Error::Core(other),
        }
    }
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Open { .. } | Error::Config { .. } => 2,
            _ => 1,
        }
    }

    pub(crate) fn format(path: &Path, line: u64, message: impl Into<String>) -> Self {
        Error::Format { path: path.to_path_buf(), line, message: message.into() }
    }

    pub(crate) fn invalid(path: &Path, message: impl Into<String>) -> Self {
        Error::Invalid { path: path.to_path_buf(), message: message.into() }
    }
}
