use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed number, JSON document, or table file.
    #[error("parse error: {0}")]
    Parse(String),

    /// Input parsed but violates an instance invariant (radius, plane,
    /// general position, duplicate ids, ...).
    #[error("invalid instance: {0}")]
    Invalid(String),

    /// A geometric or algorithmic precondition did not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("duplicate vertex {0}")]
    DuplicateVertex(usize),

    #[error("unknown vertex {0}")]
    UnknownVertex(usize),

    #[error("matching is not maximum: augmenting path through vertex {0}")]
    StaleMatching(usize),

    #[error("invalid guess: {0}")]
    InvalidGuess(String),

    #[error("estimated {estimate} guesses exceeds budget of {budget}")]
    BudgetExceeded { estimate: u128, budget: u128 },

    #[error("instance of size {n} exceeds cap of {cap}")]
    TooLarge { n: usize, cap: usize },

    #[error("table/instance digest mismatch: table {table:016x}, instance {instance:016x}")]
    DigestMismatch { table: u64, instance: u64 },

    /// A geometric invariant failed at runtime. Always an implementation bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
