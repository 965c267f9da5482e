//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cycle length must be at least 2, got {0}")]
    InvalidLambda(usize),

    #[error("deformation vector needs lambda or lambda-1 entries (lambda = {lambda}), got {got}")]
    NuLength { lambda: usize, got: usize },

    #[error("deformation vector entries must sum to zero, |sum| = {magnitude:.3e}")]
    NuSumNonzero { magnitude: f64 },

    #[error("{0} requires a positivity-compliant deformation vector")]
    PositivityRequired(&'static str),

    #[error("index {got} out of range for {what}, max {max}")]
    IndexOutOfRange {
        what: &'static str,
        got: usize,
        max: usize,
    },

    #[error("truncation too low: tail estimate {tail:.3e} is not below tolerance {tol:.3e}")]
    TruncationTooLow { tail: f64, tol: f64 },

    #[error("hypergeometric denominator parameter {value} is a nonpositive integer")]
    HypergeometricPole { value: String },

    #[error("dimension {got} too small, need at least {min}")]
    DimensionTooSmall { got: usize, min: usize },

    #[error("family truncated at degree {max}, requested {got}")]
    DegreeOutOfRange { got: usize, max: usize },

    #[error("eigenvalue iteration did not converge for a {size}x{size} matrix")]
    EigenvalueIteration { size: usize },
}
