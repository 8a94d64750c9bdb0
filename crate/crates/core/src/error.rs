use thiserror::Error;

use crate::domain::Point2C;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the set where the operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The bisection bracket `[0, T_max]` does not contain the gauge crossing.
    #[error("bracketing failed: scaled point still outside at t = {t_max}")]
    BracketingFailed { t_max: f64 },

    #[error("domain is not {0}")]
    Unsupported(&'static str),

    #[error("no membership certificate found for {point:?}: {reason}")]
    CertificateSearchFailed { point: Point2C, reason: String },

    #[error("compact set sample is empty")]
    EmptyCompactSet,

    #[error("origin certification failed at {point:?}: {reason}")]
    CertificationFailed { point: Point2C, reason: String },

    /// A command-line flag or config-file key is malformed or violates a
    /// configuration invariant.
    #[error("usage error in {flag}: {message}")]
    Usage { flag: String, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn usage(flag: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Usage { flag: flag.into(), message: message.into() }
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
