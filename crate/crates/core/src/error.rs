use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A q-expansion is known to fewer coefficients than an operation needs.
    #[error("insufficient precision: need at least {required} coefficients, have {available}")]
    Precision { required: usize, available: usize },

    #[error("no separating Hecke operator for weight {weight} (tried T2 + c*T3 for c <= {max_c})")]
    Degeneracy { weight: u32, max_c: u32 },

    #[error("eigen residual {residual:.3e} exceeds {tolerance:.1e} for weight {weight}, p = {prime} at {bits} bits")]
    Residual {
        weight: u32,
        prime: u64,
        residual: f64,
        tolerance: f64,
        bits: u32,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource guard: {0}")]
    Resource(String),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error("cache format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
