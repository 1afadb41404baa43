use thiserror::Error;

/// Failures mapped onto process exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// A verification or acceptance check did not pass.
    #[error("{0}")]
    Failed(String),
    #[error("usage: {0}")]
    Usage(String),
    #[error("data: {0}")]
    Data(String),
    #[error("numeric: {0}")]
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
            CliError::Numeric(_) => 4,
        }
    }
}

impl From<qcaps::Error> for CliError {
    fn from(e: qcaps::Error) -> Self {
        use qcaps::Error as E;
        let msg = e.to_string();
        match e {
            E::Argument(_) | E::Size { .. } => CliError::Usage(msg),
            E::Numeric(_) | E::PostSelection(_) | E::Contract(_) => CliError::Numeric(msg),
            E::Encoding(_) | E::Parse { .. } | E::Data(_) | E::Io(_) => CliError::Data(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
