use thiserror::Error;

/// Errors raised by the simulator library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter violates its physical or structural precondition.
    #[error("invalid `{field}`: {reason}")]
    Domain { field: &'static str, reason: String },

    /// The requested Hilbert space is larger than the configured cap.
    #[error("basis dimension {dimension} exceeds the cap of {cap}")]
    Resource { dimension: u128, cap: usize },

    /// An operator, basis and species that do not belong together.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// A vector whose length does not match the operator dimension.
    #[error("vector length {found} does not match operator dimension {expected}")]
    Length { expected: usize, found: usize },

    /// The iterative eigensolver ran out of restarts.
    #[error(
        "eigensolver did not converge after {restarts} restarts \
         ({converged}/{requested} pairs converged, worst residual {worst_residual:.3e})"
    )]
    NoConvergence {
        restarts: usize,
        converged: usize,
        requested: usize,
        worst_residual: f64,
    },
}

impl Error {
    pub(crate) fn domain(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            field,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
