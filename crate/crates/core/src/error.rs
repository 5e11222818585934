use thiserror::Error;

/// Errors surfaced by ensemble construction, state builders and evolution.
#[derive(Debug, Error)]
pub enum RmtError {
    /// Ensemble parameters violate a precondition (N < 2, lambda <= 0, ...).
    #[error("invalid ensemble spec: {0}")]
    InvalidSpec(String),

    /// A matrix expected to be symmetric/Hermitian is not, beyond tolerance.
    #[error("matrix is not Hermitian: max asymmetry {asymmetry:.3e} exceeds {tolerance:.3e}")]
    NonHermitian { asymmetry: f64, tolerance: f64 },

    /// The eigensolver failed to converge.
    #[error("eigensolver did not converge")]
    EigenFailed,

    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: {context} (got {got}, expected {expected})")]
    DimensionMismatch {
        context: &'static str,
        got: usize,
        expected: usize,
    },

    /// A statistical-operator construction violates its invariants.
    #[error("invalid statistical operator: {0}")]
    InvalidStatOperator(String),

    /// An observable construction violates its invariants.
    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    /// Input collection empty or otherwise degenerate.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Spectrum carries degeneracies beyond the stated gap tolerance.
    #[error("degenerate spectrum: minimal gap {min_gap:.3e} below {tolerance:.3e}")]
    DegenerateSpectrum { min_gap: f64, tolerance: f64 },

    /// Non-finite value encountered where a finite one is required.
    #[error("non-finite value: {0}")]
    NonFinite(String),
}
