use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum OlabError {
    /// An argument lies outside the domain of the operation (negative t, r <= 0, alpha >= n).
    #[error("domain error: {0}")]
    Domain(String),
    /// A constructor parameter is invalid (p < 1, beta outside (0,1), ...).
    #[error("parameter error: {0}")]
    Parameter(String),
    /// A configuration record is malformed or unsupported.
    #[error("config error: {0}")]
    Config(String),
    /// A requested ball does not fit in the sampling grid.
    #[error("ball not representable: {0}")]
    Unrepresentable(String),
}

pub type Result<T> = std::result::Result<T, OlabError>;
