use thiserror::Error;

/// Errors raised by the simulator and the capacity solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range for {len} users")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("cannot fill {streams} streams with distinct users from {users} users")]
    TooFewUsers { streams: usize, users: usize },

    #[error("missing interference column for uplink user {0}")]
    MissingInterferenceColumn(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("{subsets} subsets exceed the enumeration cap of {cap}; use the bound instead")]
    SubsetCapExceeded { subsets: u128, cap: u128 },

    #[error("positive-definite factorization failed at pivot {0}")]
    NotPositiveDefinite(usize),

    #[error("waterfilling did not converge in {iterations} iterations (last objective {last_objective})")]
    NoConvergence { iterations: usize, last_objective: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
