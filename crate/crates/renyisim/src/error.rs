use std::path::PathBuf;

/// Everything the binary can fail with; [`CliError::exit_code`] maps it to a process status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] renyisim_core::Error),
    #[error("cannot read {}: {source}", path.display())]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {}: {source}", path.display())]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed {what} in {}: {source}", path.display())]
    Parse { what: &'static str, path: PathBuf, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// 3 for guard overruns, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(renyisim_core::Error::GuardExceeded { .. }) => 3,
            _ => 2,
        }
    }
}
