use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live in different polynomial rings.
    #[error("variable list mismatch: {left:?} vs {right:?}")]
    VariableMismatch { left: Vec<String>, right: Vec<String> },

    /// Input outside the domain of an operation (zero divisor, bad constant term, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A variety description violates one of its defining clauses.
    #[error("invalid spec ({clause}): {detail}")]
    Validation { clause: &'static str, detail: String },

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn validation(clause: &'static str, detail: impl Into<String>) -> Self {
        Error::Validation { clause, detail: detail.into() }
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
