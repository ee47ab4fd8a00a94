use thiserror::Error;

/// Errors shared across the crate.
///
/// The variants mirror the three failure modes the operations distinguish:
/// bad arguments, inputs outside the supported size envelope, and
/// enumeration budgets running out mid-computation.
#[derive(Debug, Error)]
pub enum Error {
    /// The caller passed a value that violates a precondition.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The input is outside the size envelope the implementation supports.
    #[error("unsupported input: {0}")]
    Capability(String),

    /// An enumeration exceeded its configured budget.  `produced` counts
    /// the items generated before the budget ran out.
    #[error("budget of {budget} exceeded after {produced} items: {what}")]
    Budget {
        what: String,
        budget: u64,
        produced: u64,
    },

    /// A text or JSON artifact failed to parse.  `line` is 1-based when known.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn argument(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub fn capability(msg: impl Into<String>) -> Self {
        Error::Capability(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
