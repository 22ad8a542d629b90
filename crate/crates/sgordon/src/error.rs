//! Error type shared by all modules.

use std::fmt;

/// Errors produced by potential evaluation, quadrature, propagation and the
/// report pipeline.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Evaluation exactly at the center of a power singularity.
    SingularPoint { location: f64 },
    /// A power-law exponent outside the integrable range for the requested norm.
    NonIntegrable { exponent: f64 },
    /// Operation requires a periodic potential but no period is set.
    MissingPeriod,
    /// The sliding-window supremum of an aperiodic, unbounded function.
    UnboundedSupremum,
    /// A solution seeded with the zero vector.
    ZeroInitialVector,
    /// Precondition violation (bad grid, hypothesis out of range, λ ≤ γ, ...).
    InvalidParameter(String),
    /// A computation exceeding its configured desk-scale budget.
    Budget(String),
    /// Quadrature or step-controller failure.
    Numerics(String),
    /// Malformed or inconsistent run configuration.
    Config(String),
    /// Report or config file I/O failure.
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::SingularPoint { location } => {
                write!(f, "evaluation at singular point t = {location}")
            }
            Error::NonIntegrable { exponent } => {
                write!(f, "nonintegrable singularity: exponent {exponent} out of range")
            }
            Error::MissingPeriod => write!(f, "operation requires a periodic potential"),
            Error::UnboundedSupremum => {
                write!(f, "cannot bound supremum: aperiodic unbounded input")
            }
            Error::ZeroInitialVector => write!(f, "initial state vector must be nonzero"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Budget(msg) => write!(f, "budget exceeded: {msg}"),
            Error::Numerics(msg) => write!(f, "numerical failure: {msg}"),
            Error::Config(msg) => write!(f, "configuration error: {msg}"),
            Error::Io(msg) => write!(f, "i/o error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
