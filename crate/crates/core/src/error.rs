use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("arity error at byte {offset}: {msg}")]
    Arity { offset: usize, msg: String },
    #[error("role inclusion at byte {offset} is not allowed in ALCQ mode")]
    RoleInclusionInAlcq { offset: usize },
    #[error("counting restriction at byte {offset} is not allowed in ALCH mode")]
    CountingInAlch { offset: usize },
    #[error("operation requires {0}")]
    UnsupportedDialect(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    /// A constructed separator or interpolant failed its own certification.
    /// This is an internal soundness bug, never a user error.
    #[error("soundness check failed: {0}")]
    Soundness(String),
}

pub type Result<T> = std::result::Result<T, Error>;
