//! Error type shared by every module of the crate.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Failures reported by the algebra, kernel, scaling, Newton, solver and
/// transform layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A block shape was empty or contained a block smaller than two.
    #[error("invalid block shape: {0}")]
    InvalidShape(String),

    /// Two operands did not share the same block structure or length.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A block index was outside the shape.
    #[error("block index {index} out of range for {blocks} block(s)")]
    BlockIndex { index: usize, blocks: usize },

    /// A scalar function with a pole at zero met a non-positive eigenvalue.
    #[error("domain violation in {function}: eigenvalue {value:e} is not positive")]
    DomainViolation { function: String, value: f64 },

    /// A vector that had to lie in the interior of the cone did not.
    #[error("point is not strictly interior: {0}")]
    NotInterior(String),

    /// A parameter was outside its admissible range.
    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    /// A scalar root finder did not reach its tolerance within the cap.
    #[error("root finding for {what} did not converge after {iterations} iterations")]
    NoConvergence { what: String, iterations: usize },

    /// No (kappa, gamma) pair on the grid gave a positive kappa.
    #[error("no positive kappa found: {0}")]
    NoBoundConstants(String),

    /// The scaling point could not be constructed for the given pair.
    #[error("scaling construction failed: {0}")]
    ScalingBreakdown(String),

    /// A cached scaling did not reproduce W x = W^{-1} s.
    #[error("inconsistent scaling: {0}")]
    InconsistentScaling(String),

    /// The constraint matrix (or its scaled form) lost full row rank.
    #[error("rank deficient system: {0}")]
    RankDeficient(String),

    /// The supplied start does not satisfy the linear constraints.
    #[error("infeasible start: {0}")]
    InfeasibleStart(String),

    /// The step length fell below the underflow threshold.
    #[error("stagnation: {0}")]
    Stagnation(String),

    /// A recovered point violated cone membership.
    #[error("membership violated: {0}")]
    Membership(String),
}
