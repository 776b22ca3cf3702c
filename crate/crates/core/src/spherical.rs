//! Spherical-geometry divergences between univariate Gaussians: the
//! Bhattacharyya coefficient, the Bhattacharyya angle (spherical distance on
//! the positive orthant of the unit sphere of square-root densities, a space
//! of constant curvature +1), and the squared-Hellinger distance.

use crate::gaussian::Gaussian1D;

/// Bundle of the spherical quantities for one pair of measures.
///
/// `hellinger_sq = 1 - bc` exactly by construction and
/// `angle = arccos(bc)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalReport {
    /// Bhattacharyya coefficient, the inner product of square-root
    /// densities, in (0, 1].
    pub bc: f64,
    /// Bhattacharyya angle arccos(bc), in [0, pi/2).
    pub angle: f64,
    /// Squared-Hellinger distance 1 - bc, in [0, 1).
    pub hellinger_sq: f64,
}

/// Closed form of the overlap integral of square-root densities:
///
/// sqrt(2 sigma_p sigma_q / (sigma_p^2 + sigma_q^2))
///   * exp(-(mu_p - mu_q)^2 / (4 (sigma_p^2 + sigma_q^2)))
///
/// Always in (0, 1]; equals 1 iff the measures coincide.
pub fn bhattacharyya_coefficient(p: &Gaussian1D, q: &Gaussian1D) -> f64 {
    let s2 = p.variance() + q.variance();
    let dmu = p.mu() - q.mu();
    let bc = (2.0 * p.sigma() * q.sigma() / s2).sqrt() * (-dmu * dmu / (4.0 * s2)).exp();
    bc.min(1.0)
}

/// Squared-Hellinger distance, 1 minus the Bhattacharyya coefficient,
/// clamped into [0, 1] to absorb rounding near identical measures.
pub fn hellinger_squared(p: &Gaussian1D, q: &Gaussian1D) -> f64 {
    (1.0 - bhattacharyya_coefficient(p, q)).clamp(0.0, 1.0)
}

/// Bhattacharyya angle arccos(bc), the spherical distance with values in
/// [0, pi/2).
pub fn bhattacharyya_angle(p: &Gaussian1D, q: &Gaussian1D) -> f64 {
    bhattacharyya_coefficient(p, q).acos()
}

/// All three spherical quantities at once.
pub fn spherical_report(p: &Gaussian1D, q: &Gaussian1D) -> SphericalReport {
    let bc = bhattacharyya_coefficient(p, q);
    SphericalReport {
        bc,
        angle: bc.acos(),
        hellinger_sq: (1.0 - bc).clamp(0.0, 1.0),
    }
}
