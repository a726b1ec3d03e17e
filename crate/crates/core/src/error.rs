use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid gas model: {0}")]
    InvalidModel(String),
    #[error("invalid fluid state: {0}")]
    InvalidState(String),
    #[error("entropy density required by the ideal-gas model but missing")]
    MissingEntropy,
    #[error("entropy density given for a barotropic model")]
    UnexpectedEntropy,
    #[error("operation `{0}` is not supported by this gas model")]
    Unsupported(&'static str),
    #[error("degenerate jump: {0}")]
    DegenerateJump(String),
    #[error("no shock connects the given states: {0}")]
    NoShock(String),
    #[error("root finder did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("invalid jump: {0}")]
    InvalidJump(String),
    #[error("invalid solution: {0}")]
    InvalidSolution(String),
    #[error("query ({t}, {x}) lies outside the solution domain or validity horizon")]
    OutOfDomain { t: f64, x: f64 },
    #[error("query ({t}, {x}) lies on a shock trajectory")]
    OnShock { t: f64, x: f64 },
    #[error("only the gauge is determined: {0}")]
    GaugeOnly(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("finite-volume solver failed in cell {cell}: {reason}")]
    SolverFailure { cell: usize, reason: String },
    #[error("no isolated discontinuity found: {0}")]
    NoDiscontinuity(String),
    #[error("degenerate level-set gradient |grad_x f| = {0:e}")]
    DegenerateGradient(f64),
    #[error("test-function support escapes the solution domain: {0}")]
    SupportEscapes(String),
    #[error("moving endpoint meets a shock: {0}")]
    EndpointCollision(String),
}

impl Error {
    /// True for failures of a numerical procedure as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoShock(_)
                | Error::NonConvergence { .. }
                | Error::SolverFailure { .. }
                | Error::NoDiscontinuity(_)
                | Error::GaugeOnly(_)
                | Error::DegenerateGradient(_)
        )
    }
}
