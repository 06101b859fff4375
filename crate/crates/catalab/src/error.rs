use thiserror::Error;

/// Errors raised across the crate.
///
/// Numerical boundary cases that have a meaningful extended-real answer
/// (diverging divergences, support mismatches) are *not* errors; they are
/// returned as in-band `±∞` values. Errors are reserved for invalid inputs,
/// violated preconditions and genuine numerical failures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("tensor factor {index} out of range (state has {count} factors)")]
    UnknownFactor { index: usize, count: usize },

    #[error("composite dimension {dim} exceeds the soft cap {cap} (override with CATALAB_DIM_CAP)")]
    DimCapExceeded { dim: usize, cap: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("conversion channel infeasible: failure-branch state has eigenvalue {min_eig:.6e} < 0")]
    InfeasibleChannel { min_eig: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
