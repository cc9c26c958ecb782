use thiserror::Error;

/// Errors reported for rejected inputs and configurations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("integration interval is empty: lo = {lo}, hi = {hi}")]
    EmptyInterval { lo: f64, hi: f64 },
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("invalid fading specification: {0}")]
    InvalidFading(String),
    #[error("unsupported constellation: {0}")]
    UnsupportedConstellation(String),
    #[error("bit vector of length {len} is not a multiple of {group}")]
    BitLength { len: usize, group: usize },
    #[error("invalid configuration field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("target BER {target} is not crossed by {curve}")]
    NotCrossed { curve: String, target: f64 },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
