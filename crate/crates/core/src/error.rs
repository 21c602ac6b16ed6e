use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the set where the requested quantity exists.
    #[error("domain error: {0}")]
    Domain(String),
    /// A quadrature or root finder ran out of budget before meeting its tolerance.
    #[error("no convergence: {message} (partial estimate {partial:e})")]
    Convergence { message: String, partial: f64 },
    /// Malformed external input (CSV, JSON).
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
