use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Library(#[from] qho_dual::Error),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    /// Short machine-readable category for error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Library(_) => "numerical",
            CliError::Argument(_) => "argument",
            CliError::Io { .. } => "io",
            CliError::Internal(_) => "internal",
        }
    }
}
