use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CcrError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("incompatible operator realizations: {0}")]
    IncompatibleRealizations(String),

    #[error("power iteration did not converge after {iterations} iterations (last relative change {last_change:e})")]
    NonConvergence { iterations: usize, last_change: f64 },

    #[error("resource cap exceeded: {what} needs {required_bytes} bytes, budget is {budget_bytes} bytes")]
    ResourceCap {
        what: String,
        required_bytes: u128,
        budget_bytes: u128,
    },

    #[error("zero vector where a nonzero state is required")]
    ZeroVector,

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("exclusion: creation on mode {mode} annihilates the state at order {order}")]
    Exclusion { mode: usize, order: usize },
}

pub type Result<T> = std::result::Result<T, CcrError>;
