//! Error type shared by all modules.

use thiserror::Error;

/// Errors produced by the battery simulator.
#[derive(Debug, Error)]
pub enum QbError {
    /// An operation requiring a Hermitian matrix received one that is not.
    #[error("matrix is not Hermitian: max |M - M^dag| = {residual:.3e}")]
    NonHermitianInput { residual: f64 },

    /// Two matrices of different dimensions were combined.
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    /// A density matrix violates Hermiticity, unit trace, or positivity.
    #[error("invalid density matrix: {reason}")]
    InvalidState { reason: String },

    /// The closed-form eigenvector construction is singular for these
    /// parameters; fall back to the numeric eigensolver.
    #[error("closed-form spectrum degenerate: {reason}")]
    DegenerateClosedForm { reason: String },

    /// A time grid with non-positive extent or fewer than two points.
    #[error("bad time grid: {reason}")]
    BadGrid { reason: String },

    /// A fixed-step integrator was asked to take steps too large for
    /// the problem's fastest rate.
    #[error("integration step {step:.3e} exceeds allowed {max_step:.3e}")]
    StepTooLarge { step: f64, max_step: f64 },

    /// A trace expected to be real carried a non-negligible imaginary part.
    #[error("trace has non-negligible imaginary part {imag:.3e}")]
    NonRealTrace { imag: f64 },

    /// Invalid run or sweep configuration, with the offending field.
    #[error("config error: {field}: {reason}")]
    Config { field: String, reason: String },

    /// Filesystem failure while writing outputs.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl QbError {
    /// Shorthand for a [`QbError::Config`] with a named field.
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        QbError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
