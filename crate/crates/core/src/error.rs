use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {function}: {detail}")]
    Domain { function: &'static str, detail: String },

    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A structural hypothesis the computation relies on does not hold.
    #[error("hypothesis not satisfied: {0}")]
    Precondition(String),

    #[error("root not bracketed: f({lo}) = {f_lo} and f({hi}) = {f_hi} have the same sign")]
    NoBracket { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("{what} did not converge (estimate {estimate}, error estimate {error})")]
    NonConvergence { what: String, estimate: f64, error: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("non-finite operator value for {function} at sample values {values:?}")]
    NonFinite { function: String, values: Vec<f64> },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl Error {
    pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            function,
            detail: detail.into(),
        }
    }

    /// True for failures caused by an iteration or subdivision budget.
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}
