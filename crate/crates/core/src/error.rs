use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A restricted syndrome had odd cardinality, so no perfect matching
    /// exists. This points at a syndrome-extraction bug upstream.
    #[error("odd number of highlighted nodes ({count}) in {context}")]
    Parity { count: usize, context: String },

    #[error("no face subset at red vertex {vertex} reproduces the local edge set")]
    LiftingFailure { vertex: usize },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("no bracketed crossing: {0}")]
    NoCrossing(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
