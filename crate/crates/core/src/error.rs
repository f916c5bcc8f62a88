use thiserror::Error;

/// Failures reported by the evaluators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LambertError {
    /// The argument lies outside the domain of the requested branch or operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The working precision cannot resolve the input (e.g. its position
    /// relative to the branch point) or the requested digits.
    #[error("precision error: {0}")]
    Precision(String),
    /// A recursion hit a forbidden denominator or lost its proven
    /// monotonicity at working precision.
    #[error("numerical error: {0}")]
    Numerical(String),
    /// The a-posteriori sign check rejected the enclosure even after the
    /// automatic precision increase.
    #[error("certification failed: {0}")]
    Certification(String),
}

pub type Result<T> = std::result::Result<T, LambertError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(LambertError::Domain(msg.into()))
}

pub(crate) fn numerical<T>(msg: impl Into<String>) -> Result<T> {
    Err(LambertError::Numerical(msg.into()))
}

pub(crate) fn precision<T>(msg: impl Into<String>) -> Result<T> {
    Err(LambertError::Precision(msg.into()))
}
