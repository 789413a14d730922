use thiserror::Error;

use crate::params::Regime;

/// Errors produced by the numerics in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A closed form was requested for a temperature regime it does not cover.
    #[error("regime mismatch: formula requires {expected:?}, parameters are {actual:?}")]
    RegimeMismatch { expected: Regime, actual: Regime },

    /// The request exceeds the size limits of the exact finite-lattice oracles.
    #[error("resource limit: {0}")]
    Resource(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
