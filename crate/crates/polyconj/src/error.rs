//! Error type shared across the crate.
//!
//! Every failure mode an exact computation can hit is enumerated here rather
//! than panicking, with two deliberate exceptions: out-of-field index bugs and
//! broken internal invariants in release-critical hot loops use debug
//! assertions, and cross-field arithmetic (adding elements of F_4 and F_9) is
//! a programming error and panics. Everything reachable from user input flows
//! through [`Error`].

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Division by zero in a field, polynomial ring, or series.
    DivisionByZero,
    /// Structurally invalid input: wrong field parameters, reducible modulus,
    /// mismatched fields between operands of a public entry point, etc.
    InvalidInput(String),
    /// A series was consumed past its known precision.
    PrecisionExhausted,
    /// The requested operation needs a real (non-degenerate) quadratic context
    /// but the discriminant was a perfect square.
    RationalCase,
    /// Valid input outside the supported fragment (scalar centralizers,
    /// non-semisimple matrices, Pell in characteristic 2).
    Unsupported(String),
    /// An internal consistency check failed. Always a bug: report it.
    InternalInvariantViolation(String),
    /// An enumeration exceeded its configured budget before completing.
    BudgetExceeded(String),
    /// Text input failed to parse. Positions are 1-based.
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::PrecisionExhausted => write!(f, "series precision exhausted"),
            Error::RationalCase => write!(f, "discriminant is a perfect square (rational case)"),
            Error::Unsupported(msg) => write!(f, "unsupported: {msg}"),
            Error::InternalInvariantViolation(msg) => {
                write!(f, "internal invariant violation: {msg}")
            }
            Error::BudgetExceeded(msg) => write!(f, "budget exceeded: {msg}"),
            Error::Parse { line, col, msg } => write!(f, "parse error at {line}:{col}: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Error {
        Error::InvalidInput(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Error {
        Error::InternalInvariantViolation(msg.into())
    }

    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> Error {
        Error::Parse { line, col, msg: msg.into() }
    }
}
