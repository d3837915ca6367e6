use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty exponent interval: {0}")]
    EmptyInterval(String),

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("bootstrap did not terminate within {0} steps")]
    NonTermination(usize),

    #[error("unsupported dimension N = {0}")]
    UnsupportedDimension(usize),

    #[error("quadrature failed to converge: {0}")]
    QuadratureFailure(String),

    #[error("source is not supported inside the box: {0}")]
    SupportViolation(String),

    #[error("ratio |G|/g_delta is unbounded on the sampled range (sup {sup:.3e} at r = {at:.3})")]
    UnboundedRatio { sup: f64, at: f64 },

    #[error("L^p verdict inconclusive: p = {p} is within 1e-3 of the critical exponent {critical}")]
    Inconclusive { p: f64, critical: f64 },

    #[error("fixed-point iteration did not converge in {iterations} iterations (last update {last:.3e})")]
    MaxIterExceeded { iterations: usize, last: f64 },

    #[error("fixed-point iterate blew up at iteration {iteration} (norm {norm:.3e})")]
    BlowUp { iteration: usize, norm: f64 },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),
}
