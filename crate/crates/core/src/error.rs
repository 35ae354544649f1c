use alloc::boxed::Box;
use core::fmt;

use crate::exactness::StationaryDensity;
use crate::rational::Rational;

/// Which class-F parameter constraint was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Param {
    P,
    S,
    D,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// `p ≤ 1`, `s ∉ (0,1)` or `d ∉ (0,1)`.
    ParamDomain(Param),
    /// A branch image endpoint leaves `[0,1]`.
    RangeViolation { x: Rational, value: Rational },
    /// Evaluation point outside `[0,1]`.
    OutOfDomain(Rational),
    /// Composition of iterates built from different base maps.
    BaseMismatch,
    CapExceeded { requested: usize, cap: usize },
    /// No expanding iterate up to `cap`. This says the cap is too small, nothing more.
    NotFoundWithinCap { cap: usize, best_min_slope: Rational },
    /// Set evolution started from a null set.
    EmptyInput,
    /// Power iteration ran out of iterations; carries the last iterate.
    NotConverged(Box<StationaryDensity>),
    InvalidInterval { lo: Rational, hi: Rational },
    InvalidDensity(&'static str),
    InvalidArgument(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ParamDomain(Param::P) => f.write_str("p must exceed 1"),
            Error::ParamDomain(Param::S) => f.write_str("s must lie strictly between 0 and 1"),
            Error::ParamDomain(Param::D) => f.write_str("d must lie strictly between 0 and 1"),
            Error::RangeViolation { x, value } => {
                write!(f, "f({x}) = {value} leaves [0,1]")
            }
            Error::OutOfDomain(x) => write!(f, "x = {x} is outside [0,1]"),
            Error::BaseMismatch => f.write_str("iterates derive from different base maps"),
            Error::CapExceeded { requested, cap } => {
                write!(f, "requested {requested} exceeds the cap {cap}")
            }
            Error::NotFoundWithinCap { cap, best_min_slope } => write!(
                f,
                "no expanding iterate up to N = {cap} (best minimum slope {best_min_slope})"
            ),
            Error::EmptyInput => f.write_str("input set has measure zero"),
            Error::NotConverged(d) => write!(
                f,
                "power iteration did not converge after {} iterations (residual {:e})",
                d.iterations, d.residual
            ),
            Error::InvalidInterval { lo, hi } => {
                write!(f, "[{lo}, {hi}] is not a subinterval of [0,1]")
            }
            Error::InvalidDensity(why) => write!(f, "invalid density: {why}"),
            Error::InvalidArgument(why) => f.write_str(why),
        }
    }
}

impl core::error::Error for Error {}
