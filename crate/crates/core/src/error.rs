use alloc::string::String;

/// Errors raised by path construction, time changes and statistical tests.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A path or sample container had no entries where at least one is required.
    #[error("empty {0}")]
    Empty(&'static str),

    /// A state left the punctured space (zero Euclidean norm).
    #[error("state at index {index} has zero norm (left the punctured space)")]
    LeftDomain { index: usize },

    /// Sample times are not strictly increasing or do not start at zero.
    #[error("times are not a strictly increasing grid starting at 0 (index {index})")]
    BadTimeGrid { index: usize },

    /// A jump record is inconsistent with the stored path.
    #[error("jump record {index} inconsistent with path: {reason}")]
    BadJump { index: usize, reason: &'static str },

    /// A parameter failed validation.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// A time change is not strictly increasing or does not start at (0, 0).
    #[error("time change knots are not strictly increasing from (0, 0) (knot {index})")]
    BadTimeChange { index: usize },

    /// A time change asked for input times beyond the path's lifetime.
    #[error("time change reaches {requested} but the input path dies at {lifetime}")]
    HorizonExceeded { requested: f64, lifetime: f64 },

    /// Vector dimensions disagree.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}
