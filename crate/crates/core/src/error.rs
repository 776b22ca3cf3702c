//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by construction and divergence computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A constructor argument violated a type invariant.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        name: &'static str,
        reason: String,
    },

    /// Vector/matrix sizes do not line up.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A covariance (or a sum of precision matrices) is not numerically SPD.
    #[error("factorization failure: {0}")]
    FactorizationFailure(&'static str),

    /// A density L2 norm is at or above 1, so the embedded invariant is
    /// undefined (univariate: sigma must exceed 1/(2*sqrt(pi))).
    #[error("invalid L2 norm: {quantity} = {value}")]
    InvalidNorm { quantity: &'static str, value: f64 },

    /// A denominator factor in the invariant is numerically zero.
    #[error("degenerate denominator factor {0:e}")]
    DegenerateDenominator(f64),

    /// Supplied integrals break the Cauchy-Schwarz inequality.
    #[error("Cauchy-Schwarz violation: int_pq^2 = {int_pq_sq} > {bound}")]
    CauchySchwarzViolation { int_pq_sq: f64, bound: f64 },

    /// Time point at or below the validity threshold of the time-scaled
    /// invariant.
    #[error("t = {t} is at or below the validity threshold t_min = {t_min}")]
    BelowValidityTime { t: f64, t_min: f64 },

    /// Adaptive quadrature ran out of bisection depth somewhere on the
    /// support; `partial` is the best available estimate.
    #[error("quadrature exceeded max depth; partial value {partial}")]
    MaxDepthExceeded { partial: f64 },

    /// Dimension beyond what the numerical oracle supports.
    #[error("dimension {0} too large for the oracle")]
    DimensionTooLarge(usize),

    /// Complex arithmetic under/overflowed (conformal map denominator).
    #[error("numerical overflow in conformal map")]
    NumericalOverflow,
}

impl Error {
    /// Short machine-readable name of the error kind, stable for report
    /// serialization.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "InvalidParameter",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::FactorizationFailure(_) => "FactorizationFailure",
            Error::InvalidNorm { .. } => "InvalidNorm",
            Error::DegenerateDenominator(_) => "DegenerateDenominator",
            Error::CauchySchwarzViolation { .. } => "CauchySchwarzViolation",
            Error::BelowValidityTime { .. } => "BelowValidityTime",
            Error::MaxDepthExceeded { .. } => "MaxDepthExceeded",
            Error::DimensionTooLarge(_) => "DimensionTooLarge",
            Error::NumericalOverflow => "NumericalOverflow",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
