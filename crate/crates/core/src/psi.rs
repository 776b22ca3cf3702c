//! Closed form of the L2-embedded hyperbolic invariant between univariate
//! Gaussian measures, together with its validity conditions, the
//! Brownian-motion time evolution and the large-variance limits.
//!
//! Densities are treated as elements of L2. The invariant
//!
//!   psi = 2 ||p - q||^2 / ((1 - ||p||^2)(1 - ||q||^2))
//!
//! only makes sense while both squared norms stay below 1, which for a
//! Gaussian means sigma > 1/(2 sqrt(pi)). Everything here reduces the
//! integrals to closed form; the `oracle` module recomputes them by
//! quadrature for cross-validation.

use crate::error::{Error, Result};
use crate::gaussian::Gaussian1D;

/// 1/(2 sqrt(pi)), the standard-deviation threshold below which a Gaussian
/// density has L2 norm >= 1 and the embedded invariant is undefined.
pub const SIGMA_LOWER_BOUND: f64 = 0.25 * std::f64::consts::FRAC_2_SQRT_PI;

/// A denominator factor closer to zero than this is treated as degenerate.
const DENOM_GUARD: f64 = 1e-300;

/// Tolerance for the Cauchy-Schwarz consistency check on user-supplied
/// integrals.
const CAUCHY_SCHWARZ_TOL: f64 = 1e-12;

/// Closed-form invariant of one pair plus every intermediate quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiReport {
    /// The invariant itself; non-negative, zero iff the measures coincide.
    pub psi: f64,
    /// ||p||^2 = 1/(2 sigma_p sqrt(pi)).
    pub l2_norm_sq_p: f64,
    /// ||q||^2 = 1/(2 sigma_q sqrt(pi)).
    pub l2_norm_sq_q: f64,
    /// The cross term; 2 sqrt(2) lambda equals 4 times the cross integral.
    pub lambda: f64,
    /// Both norms strictly below 1 (always true for a returned report; kept
    /// explicit for serialization).
    pub valid: bool,
}

/// Squared L2 norm of a Gaussian density: 1/(2 sigma sqrt(pi)).
pub fn l2_norm_squared(g: &Gaussian1D) -> f64 {
    SIGMA_LOWER_BOUND / g.sigma()
}

/// The cross term
/// lambda = exp(-(mu_p - mu_q)^2 / (2 (sigma_p^2 + sigma_q^2)))
///          * (pi (sigma_p^2 + sigma_q^2))^(-1/2).
///
/// Strictly positive; underflows to 0 for huge mean separations, which is
/// documented behaviour rather than an error.
pub fn lambda_term(p: &Gaussian1D, q: &Gaussian1D) -> f64 {
    let s2 = p.variance() + q.variance();
    let dmu = p.mu() - q.mu();
    (-dmu * dmu / (2.0 * s2)).exp() * (std::f64::consts::PI * s2).sqrt().recip()
}

/// The pointwise product of two Gaussian densities is a rescaled Gaussian:
/// p(x) q(x) = height * N(mu, sigma^2)(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianProduct {
    pub mu: f64,
    pub sigma: f64,
    /// The integral of the product, often written h_pq.
    pub height: f64,
}

/// Decompose the pointwise product p(x) q(x) into its Gaussian form.
pub fn gaussian_product_form(p: &Gaussian1D, q: &Gaussian1D) -> GaussianProduct {
    let vp = p.variance();
    let vq = q.variance();
    let s2 = vp + vq;
    let dmu = p.mu() - q.mu();
    GaussianProduct {
        mu: (p.mu() * vq + q.mu() * vp) / s2,
        sigma: (vp * vq / s2).sqrt(),
        height: (-dmu * dmu / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2).sqrt(),
    }
}

fn check_sigma(quantity: &'static str, sigma: f64) -> Result<()> {
    if sigma <= SIGMA_LOWER_BOUND {
        return Err(Error::InvalidNorm { quantity, value: sigma });
    }
    Ok(())
}

/// Closed form of the embedded invariant:
///
/// psi = ((sigma_p sqrt(pi))^-1 - 2 sqrt(2) lambda + (sigma_q sqrt(pi))^-1)
///       / ((1 - (2 sigma_p sqrt(pi))^-1)(1 - (2 sigma_q sqrt(pi))^-1))
///
/// Errors with `InvalidNorm` when either sigma is at or below
/// 1/(2 sqrt(pi)), and with `DegenerateDenominator` when a denominator
/// factor is numerically zero.
pub fn psi_closed_form(p: &Gaussian1D, q: &Gaussian1D) -> Result<PsiReport> {
    check_sigma("sigma_p", p.sigma())?;
    check_sigma("sigma_q", q.sigma())?;
    let norm_p = l2_norm_squared(p);
    let norm_q = l2_norm_squared(q);
    let lambda = lambda_term(p, q);
    let denom_p = 1.0 - norm_p;
    let denom_q = 1.0 - norm_q;
    if denom_p.abs() < DENOM_GUARD {
        return Err(Error::DegenerateDenominator(denom_p));
    }
    if denom_q.abs() < DENOM_GUARD {
        return Err(Error::DegenerateDenominator(denom_q));
    }
    let psi = if p.mu() == q.mu() && p.sigma() == q.sigma() {
        0.0
    } else {
        // grouping the norm terms keeps the formula exactly symmetric in p, q
        let numerator = 2.0 * (norm_p + norm_q) - 2.0 * std::f64::consts::SQRT_2 * lambda;
        (numerator / (denom_p * denom_q)).max(0.0)
    };
    Ok(PsiReport {
        psi,
        l2_norm_sq_p: norm_p,
        l2_norm_sq_q: norm_q,
        lambda,
        valid: true,
    })
}

/// Assemble the invariant directly from squared norms and the cross
/// integral: 2 (int_p2 - 2 int_pq + int_q2) / ((1 - int_p2)(1 - int_q2)).
///
/// The inputs must be consistent: both squared norms below 1 and
/// int_pq^2 <= int_p2 * int_q2 up to a small tolerance.
pub fn psi_from_integrals(int_p2: f64, int_q2: f64, int_pq: f64) -> Result<f64> {
    if int_p2.is_nan() || int_p2 >= 1.0 {
        return Err(Error::InvalidNorm { quantity: "int_p2", value: int_p2 });
    }
    if int_q2.is_nan() || int_q2 >= 1.0 {
        return Err(Error::InvalidNorm { quantity: "int_q2", value: int_q2 });
    }
    let bound = int_p2 * int_q2 + CAUCHY_SCHWARZ_TOL;
    if int_pq * int_pq > bound {
        return Err(Error::CauchySchwarzViolation {
            int_pq_sq: int_pq * int_pq,
            bound,
        });
    }
    Ok(2.0 * (int_p2 - 2.0 * int_pq + int_q2) / ((1.0 - int_p2) * (1.0 - int_q2)))
}

/// Parameters of two Brownian motions compared on a distributional basis:
/// at time t the p-law is N(t drift_p, t vol_p^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrownianPair {
    drift_p: f64,
    vol_p: f64,
    drift_q: f64,
    vol_q: f64,
}

impl BrownianPair {
    pub fn new(drift_p: f64, vol_p: f64, drift_q: f64, vol_q: f64) -> Result<Self> {
        for (name, v) in [("drift_p", drift_p), ("drift_q", drift_q)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be finite, got {v}"),
                });
            }
        }
        for (name, v) in [("vol_p", vol_p), ("vol_q", vol_q)] {
            if !v.is_finite() || v <= 0.0 {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("volatility must be finite and > 0, got {v}"),
                });
            }
        }
        Ok(BrownianPair { drift_p, vol_p, drift_q, vol_q })
    }

    /// Strict lower time bound for validity:
    /// max(1/(4 vol_p^2 pi), 1/(4 vol_q^2 pi)). At this time the smaller
    /// volatility hits the sigma threshold 1/(2 sqrt(pi)).
    pub fn t_min(&self) -> f64 {
        let tp = 1.0 / (4.0 * self.vol_p * self.vol_p * std::f64::consts::PI);
        let tq = 1.0 / (4.0 * self.vol_q * self.vol_q * std::f64::consts::PI);
        tp.max(tq)
    }

    /// The p-law at time t, N(t drift_p, t vol_p^2).
    pub fn law_p(&self, t: f64) -> Result<Gaussian1D> {
        Gaussian1D::new(t * self.drift_p, t.sqrt() * self.vol_p)
    }

    /// The q-law at time t.
    pub fn law_q(&self, t: f64) -> Result<Gaussian1D> {
        Gaussian1D::new(t * self.drift_q, t.sqrt() * self.vol_q)
    }
}

/// Time-scaled cross term:
/// lambda_t = exp(-t (drift_p - drift_q)^2 / (2 (vol_p^2 + vol_q^2)))
///            * (t pi (vol_p^2 + vol_q^2))^(-1/2).
pub fn lambda_term_at(bp: &BrownianPair, t: f64) -> f64 {
    let s2 = bp.vol_p * bp.vol_p + bp.vol_q * bp.vol_q;
    let dmu = bp.drift_p - bp.drift_q;
    (-t * dmu * dmu / (2.0 * s2)).exp() * (t * std::f64::consts::PI * s2).sqrt().recip()
}

/// The invariant between the two Brownian laws at time t, evaluated from the
/// time-scaled expression directly (not by substituting into
/// [`psi_closed_form`]; the two routes agreeing is a tested identity).
///
/// Errors with `BelowValidityTime` for t at or below [`BrownianPair::t_min`].
pub fn brownian_psi(bp: &BrownianPair, t: f64) -> Result<f64> {
    let t_min = bp.t_min();
    if t.is_nan() || t <= t_min {
        return Err(Error::BelowValidityTime { t, t_min });
    }
    if bp.drift_p == bp.drift_q && bp.vol_p == bp.vol_q {
        return Ok(0.0);
    }
    let sqrt_tpi = (t * std::f64::consts::PI).sqrt();
    let lambda_t = lambda_term_at(bp, t);
    let numerator = (1.0 / (bp.vol_p * sqrt_tpi) + 1.0 / (bp.vol_q * sqrt_tpi))
        - 2.0 * std::f64::consts::SQRT_2 * lambda_t;
    let denom =
        (1.0 - 1.0 / (2.0 * bp.vol_p * sqrt_tpi)) * (1.0 - 1.0 / (2.0 * bp.vol_q * sqrt_tpi));
    Ok((numerator / denom).max(0.0))
}

/// A sampled trajectory t -> psi(t) of a Brownian pair, restricted to times
/// strictly above the validity threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct PsiTrajectory {
    times: Vec<f64>,
    values: Vec<f64>,
    t_min: f64,
}

impl PsiTrajectory {
    /// Evaluate the invariant at the given strictly increasing times, all of
    /// which must exceed the pair's validity threshold.
    pub fn new(bp: &BrownianPair, times: &[f64]) -> Result<Self> {
        let mut values = Vec::with_capacity(times.len());
        let mut last = f64::NEG_INFINITY;
        for &t in times {
            if t <= last {
                return Err(Error::InvalidParameter {
                    name: "times",
                    reason: format!("times must be strictly increasing at t = {t}"),
                });
            }
            last = t;
            values.push(brownian_psi(bp, t)?);
        }
        Ok(PsiTrajectory {
            times: times.to_vec(),
            values,
            t_min: bp.t_min(),
        })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_min(&self) -> f64 {
        self.t_min
    }
}

/// Limit of the invariant as the other measure's deviation grows without
/// bound: 2 sigma sqrt(pi) / (2 sigma^2 pi - sigma sqrt(pi)), independent of
/// both means.
pub fn psi_limit_sigma(fixed: &Gaussian1D) -> Result<f64> {
    check_sigma("sigma", fixed.sigma())?;
    let s = fixed.sigma();
    let sqrt_pi = std::f64::consts::PI.sqrt();
    Ok(2.0 * s * sqrt_pi / (2.0 * s * s * std::f64::consts::PI - s * sqrt_pi))
}
