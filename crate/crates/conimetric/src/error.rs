use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the evaluation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Gamma requested at (or numerically indistinguishable from) a non-positive integer.
    #[error("gamma pole: x = {x} is a non-positive integer within tolerance")]
    Pole { x: f64 },

    /// Argument outside a function's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Principal-branch evaluation requested on the cut [1, +inf).
    #[error("argument {z} lies on the branch cut [1, +inf)")]
    BranchCut { z: Complex64 },

    /// An iteration failed to reach the requested tolerance within its budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// Invalid parameter combination.
    #[error("parameter error: {0}")]
    Param(String),

    /// Evaluation at a puncture of the twice-punctured plane.
    #[error("evaluation at puncture z = {z}")]
    Puncture { z: Complex64 },

    /// The density denominator came out non-positive. This signals a numerical
    /// fault; the true denominator is bounded away from zero on compact subsets.
    #[error("non-positive density denominator {denom:e} at z = {z}")]
    NonPositiveDensity { z: Complex64, denom: f64 },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Param(msg.into())
    }

    pub(crate) fn convergence(msg: impl Into<String>) -> Self {
        Error::Convergence(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
