use thiserror::Error;

/// Errors produced across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field specification mismatch")]
    SpecMismatch,
    #[error("invalid field specification: {0}")]
    InvalidSpec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("index error: {0}")]
    Index(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not in SL(d, q)")]
    NotInSl,
    #[error("invalid automorphism presentation: {0}")]
    InvalidAutomorphism(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("key generation failed after {attempts} conjugator draws")]
    KeygenFailure { attempts: usize },
    #[error("invalid ciphertext: {0}")]
    InvalidCiphertext(String),
    #[error("message of {len} bytes exceeds capacity of {capacity} bytes")]
    Capacity { len: usize, capacity: usize },
    #[error("format error: {0}")]
    Format(String),
    #[error("wrong attack model: {0}")]
    WrongAttackModel(String),
    #[error("no solution found")]
    NotFound,
    #[error("iteration budget of {0} group operations exhausted")]
    BudgetExhausted(u64),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
