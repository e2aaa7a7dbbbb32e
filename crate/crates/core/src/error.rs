use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("size limit exceeded: {what} = {got}, limit {limit}")]
    SizeLimit {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("mode configuration error: {0}")]
    Config(String),
    #[error("outcome sets are not aligned: {0}")]
    Alignment(String),
    #[error("event {0} is not a member of the outcome set")]
    Membership(String),
    #[error("likelihood ratio undefined at event {index}: alternative hypothesis assigns zero probability")]
    UndefinedRatio { index: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Short stable identifier, used for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Dimension(_) => "dimension",
            Error::SizeLimit { .. } => "size-limit",
            Error::Domain(_) => "domain",
            Error::Config(_) => "config",
            Error::Alignment(_) => "alignment",
            Error::Membership(_) => "membership",
            Error::UndefinedRatio { .. } => "undefined-ratio",
            Error::Parse(_) => "parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
