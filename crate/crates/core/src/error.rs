use std::fmt;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("malformed graph: {0}")]
    Malformed(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("rotation system is not planar (V - E + F = {0})")]
    NotPlanar(i64),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("{0} and {1} are not adjacent")]
    NotAdjacent(String, String),
    #[error("maximum degree {0} exceeds 8")]
    DegreeTooLarge(usize),
    #[error("guard violated: {0}")]
    Guard(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, msg: impl fmt::Display) -> Error {
    Error::Parse { line, msg: msg.to_string() }
}
