use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("axiom violation: {0}")]
    Axiom(String),
    #[error("missing capability: {0}")]
    Capability(String),
    #[error("amplitude pole at mu = {mu}: {detail}")]
    Pole { mu: Complex64, detail: String },
    #[error("size cap exceeded: {0}")]
    SizeCap(String),
    #[error("malformed category document: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
