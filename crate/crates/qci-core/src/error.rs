use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum QciError {
    /// Invalid construction parameters (dimensions, profile data, config fields).
    #[error("configuration error: {0}")]
    Config(String),

    /// Evaluation outside the admissible microlocal band, e.g. a generating
    /// function queried at `(σ, η)` with `η₁² a(σ)² ≤ η₂²` (turning point).
    #[error("out of admissible band: {0}")]
    OutOfBand(String),

    /// A counting/projection region boundary passes within `1e-9` of a joint
    /// spectrum point; drivers should nudge `λ` and retry.
    #[error("region boundary within 1e-9 of spectrum point {point:?}")]
    BoundaryTie { point: Vec<f64> },

    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numeric routine failed to converge.
    #[error("numeric error in {context}: {message}")]
    Numeric { context: String, message: String },

    /// The spectrum does not cover the requested region or tail margin.
    #[error("incomplete spectrum: {0}")]
    IncompleteSpectrum(String),

    /// Guard against runaway enumerations.
    #[error("memory budget exceeded: {0}")]
    MemoryBudget(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed on-disk data (spectrum tables, sidecar blobs, reports).
    #[error("parse error: {0}")]
    Parse(String),
}

impl QciError {
    pub fn config(msg: impl Into<String>) -> Self {
        QciError::Config(msg.into())
    }

    pub fn numeric(context: impl Into<String>, message: impl Into<String>) -> Self {
        QciError::Numeric {
            context: context.into(),
            message: message.into(),
        }
    }
}
