use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The inputs are well formed but lie outside the physical or mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter violates a structural invariant (non-positive width, empty grid, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The Airy denominator of a standing-wave quotient sits on (or next to) a zero.
    #[error("Airy denominator vanishes near argument {argument} (resonance pole)")]
    Pole { argument: f64 },

    /// Malformed key-value or configuration text.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
