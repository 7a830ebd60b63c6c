use thiserror::Error;

/// Errors raised by the algebra laboratory.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value lies outside the domain an operation accepts.
    #[error("domain error: {0}")]
    Domain(String),

    /// Malformed `.alg`, map, term or equation text.
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An operation, table or term has the wrong arity or size.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// Two algebras that should share a signature do not.
    #[error("signature mismatch: {0}")]
    Signature(String),

    /// A requested enumeration does not fit in the budget.
    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    Budget {
        what: String,
        needed: String,
        budget: String,
    },

    /// A hypothesis required by a check is not satisfied.
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("unknown builtin: {0}")]
    UnknownBuiltin(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn budget(what: impl Into<String>, needed: impl ToString, budget: impl ToString) -> Self {
        Error::Budget {
            what: what.into(),
            needed: needed.to_string(),
            budget: budget.to_string(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
