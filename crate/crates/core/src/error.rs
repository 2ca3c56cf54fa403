use std::fmt;
use std::io;

/// Errors produced by this crate.
#[derive(Debug)]
#[non_exhaustive]
pub enum Error {
    /// A numeric argument lay outside the domain a function accepts
    /// (a nonpositive input to a log-gamma, a coordinate outside the
    /// open unit interval, a non-finite statistic, ...).
    Domain {
        what: &'static str,
        value: f64,
    },
    /// A parameter failed validation (nonpositive scale, probability
    /// outside [0,1], empty product prior, ...).
    InvalidParameter {
        what: &'static str,
        value: f64,
    },
    /// Two vectors that must have equal length do not.
    DimensionMismatch {
        expected: usize,
        got: usize,
    },
    /// A sample that must be nonempty (or of some minimum size) is not.
    EmptySample {
        what: &'static str,
    },
    /// Data without the variation an estimator or statistic requires
    /// (constant coordinate, single occupied table cell, ...).
    Degenerate {
        what: &'static str,
    },
    /// An estimate sits at or beyond a pole of the expression that
    /// consumes it (marginal shape sums <= 1).
    Pole {
        what: &'static str,
        value: f64,
    },
    /// An iterative solver exhausted its iteration budget.
    NonConvergence {
        what: &'static str,
        iterations: usize,
    },
    /// Underflow made a draw collapse to the boundary of its support.
    Underflow {
        what: &'static str,
    },
    /// A chain is too short for the requested number of batches.
    ChainTooShort {
        len: usize,
        batches: usize,
    },
    /// Configuration file or flag values could not be interpreted.
    Config(String),
    /// Malformed observed-table or dataset input.
    Parse(String),
    Io(io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain { what, value } => {
                write!(f, "{what}: value {value} is outside the valid domain")
            }
            Error::InvalidParameter { what, value } => {
                write!(f, "invalid parameter for {what}: {value}")
            }
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::EmptySample { what } => write!(f, "{what}: sample is empty or too small"),
            Error::Degenerate { what } => write!(f, "{what}: data has no variation"),
            Error::Pole { what, value } => {
                write!(f, "{what}: value {value} is at or beyond a pole of the estimator")
            }
            Error::NonConvergence { what, iterations } => {
                write!(f, "{what}: no convergence after {iterations} iterations")
            }
            Error::Underflow { what } => {
                write!(f, "{what}: draw underflowed to the boundary of its support")
            }
            Error::ChainTooShort { len, batches } => {
                write!(f, "chain of length {len} is too short for {batches} batches")
            }
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for Error {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            Error::Io(e) => Some(e),
            _ => None,
        }
    }
}

impl From<io::Error> for Error {
    fn from(e: io::Error) -> Self {
        Error::Io(e)
    }
}
