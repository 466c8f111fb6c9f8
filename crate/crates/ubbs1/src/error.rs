use std::fmt;

/// Errors produced by distribution evaluation, quadrature, sampling, and fitting.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    Domain(String),
    /// Parameters violate their constraints.
    InvalidParams(String),
    /// Adaptive quadrature exhausted its panel budget. Carries the best
    /// estimate so the caller can decide whether it is usable.
    QuadratureBudget { value: f64, err_est: f64 },
    /// A self-validating quadrature failed its refinement check.
    QuadratureCheck { coarse: f64, fine: f64 },
    /// An iterative routine failed to converge.
    NonConvergence(String),
    /// Fewer observations than the operation's degrees of freedom require.
    InsufficientData { needed: usize, got: usize },
    /// A numerical result contradicts a structural property of the model.
    Anomaly(String),
    /// Input data failed validation (values outside (0,1), non-finite, ...).
    InvalidData(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::InvalidParams(msg) => write!(f, "invalid parameters: {msg}"),
            Error::QuadratureBudget { value, err_est } => write!(
                f,
                "adaptive quadrature exceeded its panel budget (best estimate {value}, error estimate {err_est})"
            ),
            Error::QuadratureCheck { coarse, fine } => write!(
                f,
                "quadrature self-check failed: order-n result {coarse} vs refined {fine}"
            ),
            Error::NonConvergence(msg) => write!(f, "failed to converge: {msg}"),
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} observations, got {got}")
            }
            Error::Anomaly(msg) => write!(f, "numerical anomaly: {msg}"),
            Error::InvalidData(msg) => write!(f, "invalid data: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
