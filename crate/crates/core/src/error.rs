use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error at {line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown group spec `{0}`")]
    UnknownGroup(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error("insufficient data: {0}")]
    Insufficient(String),
    #[error("presentation is not C'(1/6): max piece {max_piece}, min relator length {min_len}")]
    NotSmallCancellation { max_piece: usize, min_len: usize },
    #[error("precondition rejected: {0}")]
    Rejected(String),
    #[error("point lies outside the explored region")]
    NotInBall,
}

impl Error {
    pub fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line: 1,
            column,
            message: message.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
