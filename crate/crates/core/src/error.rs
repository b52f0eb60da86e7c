//! Shared error type for the whole crate.

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("field mismatch: F_{left} vs F_{right}")]
    FieldMismatch { left: u64, right: u64 },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("state is not normalized: |norm^2 - 1| = {deviation:e}")]
    NotNormalized { deviation: f64 },

    #[error("requested {requested} amplitudes, cap is {cap}")]
    ResourceCap { requested: u128, cap: u128 },

    #[error("noise bound t={t} covers all of F_{q} (2t+1 >= q), test window is vacuous")]
    BoundTooLarge { t: u64, q: u64 },

    #[error("alpha = {alpha} outside [0, 1/4)")]
    AlphaOutOfRange { alpha: f64 },

    #[error("Schatten exponent p = {p} is below 1")]
    PLessThanOne { p: f64 },

    #[error("exponent order violated: need r > p >= 1, got p = {p}, r = {r}")]
    ExponentOrder { p: f64, r: f64 },

    #[error("epsilon-net has no points")]
    EmptyNet,

    #[error("net construction exceeded its cardinality budget of {budget}")]
    BudgetExceeded { budget: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
