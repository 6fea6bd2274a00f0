use thiserror::Error;

/// Errors raised by distribution construction and measure evaluation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("level {level} outside the domain {domain} of {what}")]
    LevelOutOfDomain {
        what: &'static str,
        level: f64,
        domain: &'static str,
    },

    #[error("invalid support: {0}")]
    InvalidSupport(String),

    #[error("the distribution has no finite mean")]
    InfiniteMean,

    #[error("the distribution does not satisfy the regularity assumption: {0}")]
    Irregular(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("target {target} is not attainable: {reason}")]
    Unattainable { target: f64, reason: String },

    #[error("cannot parse distribution spec `{input}`: {reason}")]
    Spec { input: String, reason: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Data(err.to_string())
    }
}
