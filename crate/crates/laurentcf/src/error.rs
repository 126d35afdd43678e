use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precondition violated: {0}")]
    Precondition(String),
    /// A coefficient whose denominator vanishes modulo the prime.
    #[error("not reducible modulo {prime}: coefficient {coeff}")]
    NotReducible { prime: u64, coeff: String },
    #[error("divergent continued fraction: {0}")]
    Divergent(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("supply exhausted: {0}")]
    SupplyExhausted(String),
    /// A theorem-backed assertion failed; always an implementation bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
