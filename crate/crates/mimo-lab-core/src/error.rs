//! Error types shared across the crate.

use thiserror::Error;

/// Unified error type for configuration, domain, numerical, and parse
/// failures.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration failed validation before any computation ran.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Inputs were structurally valid but outside the domain where a formula
    /// or estimator is defined (e.g. zero-forcing with more users than
    /// subspace dimensions).
    #[error("outside domain of validity: {0}")]
    Domain(String),

    /// A numerical routine could not produce a trustworthy result (singular
    /// or badly conditioned matrix, degenerate regression input, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A scenario document could not be parsed or referenced an unknown
    /// entity.
    #[error("scenario error: {0}")]
    Scenario(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
