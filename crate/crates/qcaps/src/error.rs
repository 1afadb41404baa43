use thiserror::Error;

/// Errors produced by the simulator, datasets and training code.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size error: {qubits} qubits exceeds the configured maximum of {max}")]
    Size { qubits: usize, max: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("encoding error: {0}")]
    Encoding(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("post-selection impossible: {0}")]
    PostSelection(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(offset: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        offset,
        message: msg.into(),
    }
}
