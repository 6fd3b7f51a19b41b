//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by construction, validation and solving.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// A dimension argument was zero or otherwise unusable.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// Input data failed validation (non-finite entries, shape mismatch, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A matrix that must be Hermitian is not, within tolerance.
    #[error("hermitian violation at {context}: max deviation {deviation:.3e}")]
    HermitianViolation { context: String, deviation: f64 },

    /// A parameter lies outside its admissible range.
    #[error("parameter out of range: {0}")]
    ParameterRange(String),

    /// Problem validation failed (dangling block reference, dimension clash, ...).
    #[error("problem validation: {0}")]
    Validation(String),

    /// Inconsistent solver configuration.
    #[error("configuration: {0}")]
    Config(String),

    /// The constraint set is empty.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// The feasible region is unbounded where compactness is required.
    #[error("unbounded feasible region: {0}")]
    Unbounded(String),

    /// An iterative numerical routine failed to converge.
    #[error("numerical trouble: {0}")]
    Numerical(String),

    /// An SDP subproblem failed; carries the context in which it was solved.
    #[error("sdp subproblem failed ({context}): {source}")]
    Subproblem {
        context: String,
        #[source]
        source: Box<CoreError>,
    },
}

impl CoreError {
    /// Wraps an error with the context of the subproblem it occurred in.
    pub fn in_context(self, context: impl Into<String>) -> Self {
        CoreError::Subproblem {
            context: context.into(),
            source: Box::new(self),
        }
    }

    /// True when the root cause is a numerical-convergence failure.
    pub fn is_numerical(&self) -> bool {
        match self {
            CoreError::Numerical(_) => true,
            CoreError::Subproblem { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, CoreError>;
