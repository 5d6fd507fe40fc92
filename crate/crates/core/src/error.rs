use thiserror::Error;

/// Errors raised by the library. Estimates that are merely undefined at a
/// given `k` are not errors; see [`crate::estimators::Undefined`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty sample")]
    EmptySample,

    #[error("sample has {got} observations, fewer than 2 rows")]
    SampleTooSmall { got: usize },

    #[error("k = {k} is outside [{min}, {max}] for a sample of size {n}")]
    InvalidK {
        k: usize,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("singular quantity: {0}")]
    Singular(String),

    #[error("asymptotic formula not valid: {0}")]
    Validity(String),

    #[error("no interior optimum: {0}")]
    NoOptimum(String),

    #[error("quadrature did not reach tolerance {tol:e} (error estimate {estimate:e})")]
    Quadrature { tol: f64, estimate: f64 },

    #[error("insufficient data: {0}")]
    Insufficient(String),

    #[error("{source_name}: line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("config: {0}")]
    Config(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// Whether the failure is a numerical one (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Singular(_) | Error::NoOptimum(_) | Error::Quadrature { .. }
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
