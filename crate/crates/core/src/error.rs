use thiserror::Error;

/// Errors raised by the analysis, construction and simulation routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("matrix is not unitary (residual {residual:.3e} exceeds {tol:.0e})")]
    NotUnitary { residual: f64, tol: f64 },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("basis is not orthonormal (Gram residual {0:.3e})")]
    NotOrthonormal(f64),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("unsupported dimension {0} (supported: 2, 3)")]
    UnsupportedDimension(usize),

    #[error("transition matrix is not doubly stochastic (deviation {0:.3e})")]
    NotDoublyStochastic(f64),

    #[error("value {0} outside [0, 1]")]
    OutOfUnitInterval(f64),

    #[error("{0} must be positive")]
    ZeroCount(&'static str),

    #[error("idempotency order exceeds cap {cap}")]
    OrderCapExceeded { cap: u64 },

    #[error("no qualifying prime below {cap} for K = {k}")]
    PrimeSearchExhausted { k: u64, cap: u64 },

    #[error("invalid quadratic seed: {0}")]
    InvalidSeed(String),

    #[error("s_{t} = {value} is odd; the pair would not lie in SU(2)")]
    OddTrace { t: u64, value: String },

    #[error("discriminant {0} is a perfect square; the phases would be rational")]
    SquareDiscriminant(String),

    #[error("precision self-check failed: {0}")]
    Precision(String),

    #[error("insufficient data: need at least {needed} symbols, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Precision(_) => 3,
            Error::Io(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
