use alloc::string::String;
use core::fmt;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the operation's domain.
    Domain(String),
    /// A requested value (measure, radius) is out of the attainable range.
    Range(String),
    /// An integrand or function evaluated to NaN or infinity.
    NonFinite { at: f64 },
    /// Adaptive refinement ran out of budget before meeting the tolerance.
    NotConverged { estimate: f64, error: f64 },
    /// The existence interval of a stationary curve is empty.
    EmptyInterval,
    /// A rotation or measure integral diverges.
    Divergent(String),
    /// A root search found no sign change, or a family has no member with the requested property.
    NoSolution(String),
    /// Hypotheses of a construction are violated.
    Precondition(String),
    /// Grid too coarse to bracket the requested threshold.
    Inconclusive(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Range(m) => write!(f, "range error: {m}"),
            Error::NonFinite { at } => write!(f, "non-finite value at {at}"),
            Error::NotConverged { estimate, error } => {
                write!(f, "not converged (estimate {estimate}, error {error})")
            }
            Error::EmptyInterval => write!(f, "empty existence interval"),
            Error::Divergent(m) => write!(f, "divergent: {m}"),
            Error::NoSolution(m) => write!(f, "no solution: {m}"),
            Error::Precondition(m) => write!(f, "precondition failed: {m}"),
            Error::Inconclusive(m) => write!(f, "inconclusive: {m}"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain(_) => "domain",
            Error::Range(_) => "range",
            Error::NonFinite { .. } => "non_finite",
            Error::NotConverged { .. } => "not_converged",
            Error::EmptyInterval => "empty_interval",
            Error::Divergent(_) => "divergent",
            Error::NoSolution(_) => "no_solution",
            Error::Precondition(_) => "precondition",
            Error::Inconclusive(_) => "inconclusive",
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
