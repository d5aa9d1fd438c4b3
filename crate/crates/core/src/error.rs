use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("deck mismatch: {0}")]
    DeckMismatch(String),

    #[error("support mismatch between distributions: {0}")]
    SupportMismatch(String),

    /// Work estimate exceeds the configured budget; the message names the
    /// cheaper route when one exists.
    #[error("budget exceeded: {work} > {budget} ({hint})")]
    BudgetExceeded {
        work: String,
        budget: u64,
        hint: String,
    },

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
