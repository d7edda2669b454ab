use thiserror::Error;

/// Errors raised by the exact evaluators, degree formulas and checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A denominator vanished. Carries a rendering of the offending value.
    #[error("division by zero: denominator {0} vanishes")]
    DivisionByZero(String),

    /// A fixed-point sum was evaluated at a substitution that makes some
    /// Euler class vanish (two coordinates collide, `x_i = -x_j`, ...).
    #[error("degenerate substitution: {0}")]
    Degenerate(String),

    #[error("field mismatch: cannot combine {left} with {right}")]
    FieldMismatch { left: String, right: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Caller-side precondition failure.
    #[error("contract violation: {0}")]
    Contract(String),

    /// A result that must hold by construction did not (non-integral degree,
    /// negative coefficient where positivity is known). Never expected.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

macro_rules! contract {
    ($cond:expr, $($arg:tt)+) => {
        if !$cond {
            return Err($crate::error::Error::Contract(format!($($arg)+)));
        }
    };
}

pub(crate) use contract;
