//! Error type shared by every stage of the engine.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("unsupported preset {0:?}")]
    UnsupportedPreset(String),

    #[error("Weyl group exceeds the size cap of {cap} elements")]
    WeylCapExceeded { cap: usize },

    #[error("prime {prime} is not good for {preset}")]
    BadPrime { preset: String, prime: u64 },

    #[error("prime {prime} divides the order of the fundamental group of {preset}; the coinvariant algebra degenerates")]
    TorsionPrime { preset: String, prime: u64 },

    #[error("objects belong to different root data")]
    DatumMismatch,

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("decomposition failed: {0}")]
    Peel(String),

    #[error("search budget of {0} exhausted")]
    BudgetExhausted(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for returning an [`Error::Invariant`] when a condition fails.
macro_rules! ensure {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Invariant(format!($($arg)+)));
        }
    };
}
pub(crate) use ensure;
