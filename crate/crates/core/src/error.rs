//! Error type shared by every module of the crate.

use thiserror::Error;

/// Failure reported by a computation. Every variant names the module that
/// produced it so callers can report the origin without parsing messages.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{module}: domain error: {message}")]
    Domain { module: &'static str, message: String },
    #[error("{module}: resource limit exceeded: {message}")]
    Resource { module: &'static str, message: String },
    #[error("{module}: non-finite value: {message}")]
    NonFinite { module: &'static str, message: String },
    #[error("{module}: unresolved oscillation: {message}")]
    UnresolvedOscillation { module: &'static str, message: String },
    #[error("{module}: unsupported: {message}")]
    Unsupported { module: &'static str, message: String },
    #[error("{module}: numerical instability: {message}")]
    Instability { module: &'static str, message: String },
    #[error("{module}: precondition violated: {message}")]
    Precondition { module: &'static str, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(module: &'static str, message: impl Into<String>) -> Self {
        Error::Domain { module, message: message.into() }
    }

    pub fn resource(module: &'static str, message: impl Into<String>) -> Self {
        Error::Resource { module, message: message.into() }
    }

    pub fn non_finite(module: &'static str, message: impl Into<String>) -> Self {
        Error::NonFinite { module, message: message.into() }
    }

    pub fn oscillation(module: &'static str, message: impl Into<String>) -> Self {
        Error::UnresolvedOscillation { module, message: message.into() }
    }

    pub fn unsupported(module: &'static str, message: impl Into<String>) -> Self {
        Error::Unsupported { module, message: message.into() }
    }

    pub fn instability(module: &'static str, message: impl Into<String>) -> Self {
        Error::Instability { module, message: message.into() }
    }

    pub fn precondition(module: &'static str, message: impl Into<String>) -> Self {
        Error::Precondition { module, message: message.into() }
    }

    /// Name of the module that raised the error.
    pub fn module(&self) -> &'static str {
        match self {
            Error::Domain { module, .. }
            | Error::Resource { module, .. }
            | Error::NonFinite { module, .. }
            | Error::UnresolvedOscillation { module, .. }
            | Error::Unsupported { module, .. }
            | Error::Instability { module, .. }
            | Error::Precondition { module, .. } => module,
        }
    }
}
