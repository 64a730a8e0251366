use thiserror::Error;

use crate::band::{Mode, Side};

/// Errors raised by the two-band library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{side} band has {actual} entries, expected {expected}")]
    LengthMismatch {
        side: Side,
        expected: usize,
        actual: usize,
    },
    #[error("entry {index} of the {side} band violates the {mode} constraint")]
    SignViolation { side: Side, index: usize, mode: Mode },
    #[error("entry {index} of the {side} band is not finite")]
    NonFinite { side: Side, index: usize },
    #[error("invalid dimensions n={n}, b={b}, k={k}: all must be positive")]
    BadOffset { n: usize, b: usize, k: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("offsets b={b}, k={k} are not relatively prime")]
    NotCoprime { b: usize, k: usize },
    #[error("a band is empty; the spectrum is identically zero")]
    EmptyBand,
    #[error("block shapes do not chain: {0}")]
    ShapeMismatch(String),
    #[error("conjugated matrix has a nonzero at ({row}, {col}) outside the block layout")]
    LayoutViolation { row: usize, col: usize },
    #[error("count formulas disagree: {0}")]
    InconsistentCounts(String),
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    TooLarge { dim: usize, cap: usize },
    #[error("eigenvalue {value} expected positive")]
    NegativeOmega { value: f64 },
    #[error("eigenvalue {re}{im:+}i has an imaginary part above the snap tolerance")]
    RealityViolation { re: f64, im: f64 },
    #[error("eigenvalues {left} and {right} are not distinct")]
    DistinctnessViolation { left: f64, right: f64 },
    #[error("multisets have different sizes {left} and {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("matrix has entries with nonzero imaginary part")]
    NotReal,
    #[error("invalid index set: {0}")]
    BadIndexSet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Whether the error stems from the input rather than from a computation
    /// that went wrong on valid input.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::LengthMismatch { .. }
                | Error::SignViolation { .. }
                | Error::NonFinite { .. }
                | Error::BadOffset { .. }
                | Error::NotSquare { .. }
                | Error::DimensionMismatch { .. }
                | Error::NotCoprime { .. }
                | Error::TooLarge { .. }
                | Error::NotReal
                | Error::BadIndexSet(_)
                | Error::InvalidInput(_)
        )
    }
}
