use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid precision context: {0}")]
    InvalidContext(String),

    #[error("context mismatch: {left} vs {right}")]
    ContextMismatch { left: String, right: String },

    #[error("matrix has {got} entries, expected {expected}")]
    Shape { expected: usize, got: usize },

    #[error("matrix is not invertible modulo p")]
    NotInvertible,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("matrix is not unipotent")]
    NotUnipotent,

    #[error("precision too low: need {need}, have {have}")]
    PrecisionTooLow { need: u32, have: u32 },

    #[error("matrix entries are not divisible by p^{exponent}")]
    NotDivisible { exponent: u32 },

    #[error("matrix is not a lift of exp(x) modulo p")]
    NotALift,

    #[error("element budget of {cap} exceeded")]
    CapExceeded { cap: usize },

    #[error("no order found within bound {bound}")]
    BoundExceeded { bound: u64 },

    #[error("prime {p} is not admissible for {entry}: {reason}")]
    InadmissiblePrime {
        entry: String,
        p: u64,
        reason: String,
    },

    #[error("invariant violated: {invariant}; witness: {witness}")]
    InvariantViolation { invariant: String, witness: String },

    #[error("{0}")]
    InvalidInput(String),
}

impl Error {
    pub(crate) fn violation(invariant: impl Into<String>, witness: impl Into<String>) -> Self {
        Error::InvariantViolation {
            invariant: invariant.into(),
            witness: witness.into(),
        }
    }
}
