use thiserror::Error;

use crate::objects::Kind;

#[derive(Debug, Error)]
pub enum EkrError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("expected a {expected:?}, got a {got:?}")]
    KindMismatch { expected: Kind, got: Kind },

    #[error("Hamming intersection is not defined for {0:?}")]
    ModeUnsupported(Kind),

    #[error("guard violated: {0}")]
    GuardViolated(String),

    #[error("malformed anchor: {0}")]
    BadAnchor(String),

    #[error("integer overflow in exact arithmetic")]
    Overflow,

    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, EkrError>;
