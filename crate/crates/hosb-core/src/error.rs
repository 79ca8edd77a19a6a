use thiserror::Error;

/// Errors shared across the solver library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A vector argument does not match the problem's variable count.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A variable index is outside `[0, num_vars)`.
    #[error("index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },

    /// A precondition on an argument was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),

    /// The oscillator state became non-finite at the given step.
    #[error("non-finite oscillator state at step {step}")]
    NumericFailure { step: usize },

    /// Instance generation exhausted its retry budget.
    #[error("3R3X generation failed for n = {n} after {attempts} attempts")]
    GenerationFailure { n: usize, attempts: usize },

    /// The gadget reduction only handles cubic terms with coefficients of
    /// unit magnitude.
    #[error("unsupported reduction: {0}")]
    UnsupportedReduction(&'static str),

    /// A regression was requested with too few usable points.
    #[error("insufficient data: need at least {needed} finite points, got {got}")]
    InsufficientData { needed: usize, got: usize },
}
