use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the arguments does not hold.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// An enumeration or construction would exceed the configured work budget.
    #[error("budget exceeded: {what} needs {required} units, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        required: u128,
        budget: u64,
    },

    /// Exact integer arithmetic left the representable range.
    #[error("integer overflow: {0}")]
    Overflow(String),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
