use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polynomial is not irreducible over Q: {0}")]
    Reducible(String),
    #[error("prime {p} divides the leading coefficient")]
    LeadingCoefficientDivisible { p: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision cap of {bits} bits reached while {context}")]
    PrecisionCap { bits: u32, context: String },
    #[error("budget exceeded: {0}")]
    Budget(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn cap(bits: u32, context: impl Into<String>) -> Self {
        Error::PrecisionCap {
            bits,
            context: context.into(),
        }
    }

    /// True for failures caused by numeric precision limits rather than bad input.
    pub fn is_precision_failure(&self) -> bool {
        matches!(self, Error::PrecisionCap { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
