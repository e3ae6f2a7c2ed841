//! Crate-wide error type.

use core::fmt;

/// Convenience alias used throughout the crate.
pub type Result<T> = core::result::Result<T, Error>;

/// Errors produced by model construction and evaluation.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation received a parameter that violates an
    /// invariant (e.g. non-positive radius, empty anchor set).
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
    },
    /// An input lies outside the mathematical domain of an operation
    /// (e.g. a non-positive principal stretch).
    Domain {
        op: &'static str,
        reason: &'static str,
    },
    /// A coordinate or sweep value fell outside its admissible range.
    OutOfRange {
        what: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },
    /// An iterative solver hit its iteration cap without converging.
    NonConvergence {
        op: &'static str,
        iterations: u32,
    },
    /// A calibration could not determine the named parameter from the
    /// supplied anchors.
    Unidentifiable { parameter: &'static str },
    /// A configuration is geometrically impossible (e.g. requested
    /// curvature would invert the actuator cross-section).
    Infeasible {
        reason: &'static str,
        value: f64,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter { name, reason } => {
                write!(f, "invalid parameter `{name}`: {reason}")
            }
            Error::Domain { op, reason } => write!(f, "domain error in {op}: {reason}"),
            Error::OutOfRange {
                what,
                value,
                min,
                max,
            } => write!(f, "{what} = {value} outside [{min}, {max}]"),
            Error::NonConvergence { op, iterations } => {
                write!(f, "{op} failed to converge after {iterations} iterations")
            }
            Error::Unidentifiable { parameter } => {
                write!(f, "calibration cannot identify `{parameter}` from the given anchors")
            }
            Error::Infeasible { reason, value } => {
                write!(f, "infeasible configuration: {reason} (value {value})")
            }
        }
    }
}

impl core::error::Error for Error {}
