use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function has a pole at x = {0}")]
    GammaPole(f64),

    #[error("Mittag-Leffler series did not converge within {terms} terms")]
    SeriesNonConvergence { terms: usize },

    #[error("invalid fractional order {value}: {reason}")]
    InvalidOrder { value: f64, reason: &'static str },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid boundary condition: {0}")]
    InvalidBoundary(String),

    #[error("index out of range: {0}")]
    Index(String),

    #[error("non-finite right-hand side in equation {equation} at node {node}")]
    NonFinite { equation: usize, node: usize },

    #[error("missing partial derivative {0}")]
    MissingPartial(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("derivative magnitude {0:e} is below the underflow guard")]
    DerivativeUnderflow(f64),

    #[error("singular update bracket {value:e} at node {node}")]
    SingularBracket { node: usize, value: f64 },

    #[error("unknown example id {0:?}")]
    UnknownExample(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
