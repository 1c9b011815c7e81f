use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] costshare::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    /// 1 for bad input, 2 for an exhausted budget, 3 for a consistency failure.
    pub fn exit_code(&self) -> i32 {
        use costshare::Error as E;
        match self {
            CliError::Core(E::PathExplosion(_) | E::SearchBudgetExceeded(_)) => 2,
            CliError::Core(E::Consistency(_)) | CliError::Failed(_) => 3,
            _ => 1,
        }
    }
}
