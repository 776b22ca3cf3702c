//! Deterministic helpers shared by the unit, property and acceptance tests
//! (and the CLI self-verification command). Not part of the public API
//! surface proper.

use nalgebra::{DMatrix, DVector};

use crate::gaussian::{Gaussian1D, GaussianND};
use crate::hyperbolic::DiscPoint;
pub use crate::oracle::SeededRng as TestRng;

/// |actual - reference| / |reference|, falling back to the absolute error
/// when the reference is zero.
pub fn rel_err(actual: f64, reference: f64) -> f64 {
    let diff = (actual - reference).abs();
    if reference == 0.0 {
        diff
    } else {
        diff / reference.abs()
    }
}

/// Random valid Gaussian with mean in [mu_lo, mu_hi) and deviation in
/// [sigma_lo, sigma_hi).
pub fn random_gaussian(
    rng: &mut TestRng,
    mu_lo: f64,
    mu_hi: f64,
    sigma_lo: f64,
    sigma_hi: f64,
) -> Gaussian1D {
    Gaussian1D::new(rng.range(mu_lo, mu_hi), rng.range(sigma_lo, sigma_hi)).unwrap()
}

/// Uniform point of the disc of radius `max_radius` (area-uniform).
pub fn random_disc_point(rng: &mut TestRng, max_radius: f64) -> DiscPoint {
    let r = max_radius * rng.uniform().sqrt();
    let theta = rng.range(0.0, 2.0 * std::f64::consts::PI);
    DiscPoint::new(r * theta.cos(), r * theta.sin()).unwrap()
}

/// Random n-dimensional Gaussian with a well-conditioned SPD covariance
/// A A^T + n I scaled into a moderate range, means in [-2, 2).
pub fn random_spd(rng: &mut TestRng, n: usize) -> GaussianND {
    let a = DMatrix::from_fn(n, n, |_, _| rng.range(-1.0, 1.0));
    let mut sigma = &a * a.transpose();
    for i in 0..n {
        sigma[(i, i)] += 0.5 + 0.5 * n as f64;
    }
    let mu = DVector::from_fn(n, |_, _| rng.range(-2.0, 2.0));
    GaussianND::new(mu, sigma).unwrap()
}
