use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("truncation cap exceeded: {0}")]
    TruncationCapExceeded(String),

    #[error("theta order insufficient: need order {needed}, have {available}")]
    ThetaOrderInsufficient { needed: usize, available: usize },

    #[error("c must exceed 1 (got {0})")]
    LemmaConstant(f64),

    #[error("approximant undefined (λ₁ < 0): {0}")]
    ApproximantUndefined(String),

    #[error("truncation not converged: {0}")]
    NotConverged(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
}

pub type Result<T> = std::result::Result<T, Error>;
