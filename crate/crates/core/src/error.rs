use thiserror::Error;

/// Errors raised across construction, extraction and verification.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate rotation: perturbing harmonic vanishes at {0}")]
    DegenerateRotation(String),
    #[error("nodal extraction inconsistency: {0}")]
    Extraction(String),
    #[error("nodal set appears singular: {0}")]
    Singular(String),
    #[error("adaptive search failed: {0}")]
    SearchFailed(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
