use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("arity {0} exceeds the supported maximum of {1} qubits")]
    ArityOverflow(usize, usize),

    #[error("tensor of {0} legs exceeds the contraction limit of {1}")]
    SizeOverflow(usize, usize),

    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("unknown rule: {0}")]
    UnknownRule(String),

    #[error("bad rule parameters for {rule}: {msg}")]
    BadParams { rule: String, msg: String },

    #[error("invalid binding: {0}")]
    InvalidBinding(String),

    #[error("no valid circuit: {0}")]
    NoValidCircuit(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid script: {0}")]
    InvalidScript(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err<T>(line: usize, col: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line, col, msg: msg.into() })
}
