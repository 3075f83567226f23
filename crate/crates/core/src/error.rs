use thiserror::Error;

/// Errors raised by the analytic modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("normal form violation: {0}")]
    Violation(String),
    #[error("not a VI3 two-fold: {0}")]
    NotVi3(&'static str),
    #[error("u = {u} lies outside the branch ({lo}, {hi}) where V > 0")]
    OutOfBranch { u: f64, lo: f64, hi: f64 },
    #[error("x = {x} is not inside the domain [0, {end})")]
    DomainExceeded { x: f64, end: f64 },
    #[error("y = {y} is not inside the image ({end}, 0]")]
    ImageExceeded { y: f64, end: f64 },
    #[error("no sign change found while bracketing the half-map at x = {x}")]
    BracketFailure { x: f64 },
    #[error("trajectory from x = {x} left the bounding box without returning")]
    NoReturn { x: f64 },
    #[error("x = {x} is on the asymptote of the hyperbola")]
    AtAsymptote { x: f64 },
    #[error("root finder: {0}")]
    Root(#[from] crate::numerics::root::RootError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
