use thiserror::Error;

/// Errors raised by field construction, set calculus and the experiment harnesses.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("invalid field parameters: {0}")]
    InvalidField(String),
    #[error("field of order {order} exceeds the configured cap {cap}")]
    FieldTooLarge { order: u128, cap: u64 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed literal {literal:?}: {reason}")]
    MalformedLiteral { literal: String, reason: String },
    #[error("{d} does not divide the absolute degree {n}")]
    NotADivisor { d: u32, n: u32 },
    #[error("degree {degree} exceeds the composition cap {cap}")]
    DegreeCap { degree: u64, cap: u64 },
    #[error("estimated work {work} exceeds the cap {cap}")]
    WorkCap { work: u128, cap: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn literal(literal: &str, reason: impl Into<String>) -> Self {
        Error::MalformedLiteral {
            literal: literal.to_string(),
            reason: reason.into(),
        }
    }

    /// Process exit status used by the command-line driver.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::FieldTooLarge { .. } | Error::DegreeCap { .. } | Error::WorkCap { .. } => 3,
            Error::Invariant(_) => 4,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
