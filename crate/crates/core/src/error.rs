use thiserror::Error;

use crate::lattice::MultiIndex;

/// Errors raised by coefficient providers, the evaluators and the limit
/// equation solver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid family parameters: {0}")]
    InvalidParameters(String),

    #[error("coefficient not supported: {0}")]
    UnsupportedCoefficient(String),

    #[error("no table entry for multi-index {0}")]
    MissingEntry(MultiIndex),

    #[error("non-finite recurrence coefficient at {0}")]
    NonFinite(MultiIndex),

    #[error("recurrence coefficients have no limit along this ray: {0}")]
    NoLimit(String),

    #[error("extrapolation did not converge: {0}")]
    NonConvergence(String),

    #[error("degenerate limit data: {0}")]
    DegenerateLimit(String),

    #[error("evaluation point {re}{im:+}i too close to a zero of P at {index}")]
    DegeneratePoint { index: MultiIndex, re: f64, im: f64 },

    #[error("|Im x| = {im_abs:e} is below delta_min = {delta_min:e}; use the lower-set evaluator")]
    NearAxis { im_abs: f64, delta_min: f64 },

    #[error("lower set of size {size} exceeds the cap {cap}")]
    ResourceLimit { size: u128, cap: usize },

    #[error("zero isolation failed at {index}: found {found} of {expected} sign changes")]
    ZeroIsolation {
        index: MultiIndex,
        found: usize,
        expected: usize,
    },

    #[error("root solver did not converge after {iterations} iterations (residual {residual:e})")]
    Solver { iterations: usize, residual: f64 },

    #[error("branch tracking failed near x = {near_re}{near_im:+}i (closest branch point {bp_re}{bp_im:+}i)")]
    Tracking {
        near_re: f64,
        near_im: f64,
        bp_re: f64,
        bp_im: f64,
    },

    #[error("x = {0} lies inside the hull of the real branch points")]
    InsideCut(f64),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
