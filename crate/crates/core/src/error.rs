use thiserror::Error;

/// Errors raised by the closed forms, solvers and measurements.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter out of domain: {0}")]
    ParameterDomain(String),

    /// `m >= p - 1`: every growth exponent degenerates here.
    #[error("borderline regime: m = {m} is not below p - 1 = {}", .p - 1.0)]
    BorderlineRegime { p: f64, m: f64 },

    #[error("solution exceeded the overflow guard before r = {radius}")]
    GrowthOverflow { radius: f64 },

    #[error("step size underflow at r = {radius}")]
    StepUnderflow { radius: f64 },

    #[error("shooting target {target} is not bracketed: largest shot reached {reached}")]
    InconsistentWeights { target: f64, reached: f64 },

    #[error("fixed-point iteration stalled after {iterations} iterations (relative update {update:e})")]
    NonConvergence { iterations: usize, update: f64 },

    #[error("linear solver did not reach {tolerance:e} in {iterations} iterations (residual {residual:e})")]
    LinearSolver {
        iterations: usize,
        residual: f64,
        tolerance: f64,
    },

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error("point outside the measurable region: {0}")]
    OutsideDomain(String),

    #[error("radius {radius} is below the resolution limit {limit}")]
    Resolution { radius: f64, limit: f64 },

    #[error("point is not a local extremum: {0}")]
    NotExtremum(String),

    #[error("degenerate profile: {0}")]
    DegenerateProfile(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::ParameterDomain(msg.into()))
}
