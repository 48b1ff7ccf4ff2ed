use thiserror::Error;

/// Errors reported by the public API.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A hard precondition on the parameters was violated.
    #[error("domain error: {0}")]
    Domain(String),
    /// An expansion was asked for an angle outside its validity band.
    #[error("theta = {theta} lies outside the validity band [{lo}, {hi}]")]
    DomainTooCloseToEndpoint { theta: f64, lo: f64, hi: f64 },
    /// A node was requested from a branch that does not cover it.
    #[error("node {k}: theta0 = {theta0} is outside the band of the {branch} branch")]
    BranchMisuse {
        k: usize,
        theta0: f64,
        branch: &'static str,
    },
    /// A node or zero index outside the admissible range.
    #[error("index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    /// The near-zero Bessel series was called at a point that is not a zero.
    #[error("J_{nu}({u}) = {residual} is not a zero to tolerance")]
    NotAZero { nu: f64, u: f64, residual: f64 },
    /// The coefficient artifact is malformed.
    #[error("coefficient table, line {line}: {msg}")]
    Table { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
