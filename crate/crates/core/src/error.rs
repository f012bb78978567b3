use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element does not belong to this group family: {0}")]
    FamilyMismatch(String),

    #[error("operation requires a {expected} group, got {found}")]
    WrongFamily { expected: &'static str, found: &'static str },

    #[error("unknown letter `{0}`")]
    UnknownLetter(String),

    #[error("invalid group specification: {0}")]
    InvalidSpec(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("budget of {budget} exceeded while {context}")]
    Budget { budget: usize, context: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("quotients disagree on the edge subgroup: {0}")]
    EdgeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
