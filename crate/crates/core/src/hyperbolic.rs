//! The hyperbolic side: Fisher-Rao distance on the Gaussian parameter
//! manifold, the upper half-plane model, conformal maps onto the unit disc,
//! the disc distance and the isometric invariant of the disc.
//!
//! Curvature conventions, for reference: the parameter manifold has constant
//! curvature -1/2, the half-plane and disc models have curvature -1, and the
//! two are related by rescaling lengths with 1/sqrt(2).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::gaussian::Gaussian1D;

/// Guard against atanh blowing up when rounding pushes the distance ratio
/// onto the boundary.
const ZETA_CLAMP: f64 = 1.0 - 1e-15;

/// A point of the upper half-plane model, Im(z) > 0 strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    z: Complex64,
}

impl HalfPlanePoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::InvalidParameter {
                name: "z",
                reason: format!("coordinates must be finite, got {re} + {im}i"),
            });
        }
        if im <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "z",
                reason: format!("imaginary part must be > 0, got {im}"),
            });
        }
        Ok(HalfPlanePoint { z: Complex64::new(re, im) })
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }
}

/// A point of the unit-disc model, |z| < 1 strictly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint {
    z: Complex64,
}

impl DiscPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        let z = Complex64::new(re, im);
        if !re.is_finite() || !im.is_finite() || z.norm_sqr() >= 1.0 {
            return Err(Error::InvalidParameter {
                name: "z",
                reason: format!("point must satisfy |z| < 1, got {re} + {im}i"),
            });
        }
        Ok(DiscPoint { z })
    }

    pub(crate) fn from_complex_unchecked(z: Complex64) -> Self {
        debug_assert!(z.norm_sqr() < 1.0 + 1e-12);
        DiscPoint { z }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }
}

/// Conformal map from the half-plane onto the disc,
/// z -> e^{i theta} (z - kappa) / (z - conj(kappa)),
/// sending `kappa` to the disc center and rotating by `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobiusMap {
    kappa: HalfPlanePoint,
    theta: f64,
}

impl MobiusMap {
    /// `theta` must be finite; it is reduced mod 2 pi for a canonical form.
    pub fn new(kappa: HalfPlanePoint, theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::InvalidParameter {
                name: "theta",
                reason: "rotation must be finite".to_string(),
            });
        }
        Ok(MobiusMap {
            kappa,
            theta: theta.rem_euclid(2.0 * std::f64::consts::PI),
        })
    }

    pub fn kappa(&self) -> HalfPlanePoint {
        self.kappa
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }
}

impl Default for MobiusMap {
    /// kappa = i, theta = 0. All distances are independent of this choice;
    /// the default is cosmetic.
    fn default() -> Self {
        MobiusMap {
            kappa: HalfPlanePoint { z: Complex64::new(0.0, 1.0) },
            theta: 0.0,
        }
    }
}

/// An automorphism of the disc, z -> e^{i phi} (z - a) / (1 - conj(a) z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscAutomorphism {
    a: DiscPoint,
    phi: f64,
}

impl DiscAutomorphism {
    pub fn new(a: DiscPoint, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::InvalidParameter {
                name: "phi",
                reason: "rotation must be finite".to_string(),
            });
        }
        Ok(DiscAutomorphism { a, phi })
    }

    /// The inverse automorphism: w -> e^{-i phi} (w + e^{i phi} a) / (1 + conj(e^{i phi} a) w),
    /// i.e. the center parameter is -e^{i phi} a with rotation -phi.
    pub fn inverse(&self) -> Self {
        let rot = Complex64::from_polar(1.0, self.phi);
        DiscAutomorphism {
            a: DiscPoint::from_complex_unchecked(-rot * self.a.z),
            phi: -self.phi,
        }
    }
}

/// The parameter-dependent ratio entering the Fisher-Rao distance:
///
/// zeta = sqrt((dmu^2 + 2 (sigma_q - sigma_p)^2) / (dmu^2 + 2 (sigma_q + sigma_p)^2))
///
/// in [0, 1); zero iff the measures coincide. The single formula extends
/// continuously to equal means or equal deviations.
pub fn fisher_rao_zeta(p: &Gaussian1D, q: &Gaussian1D) -> f64 {
    let dmu2 = (q.mu() - p.mu()).powi(2);
    let ds = q.sigma() - p.sigma();
    let ss = q.sigma() + p.sigma();
    ((dmu2 + 2.0 * ds * ds) / (dmu2 + 2.0 * ss * ss)).sqrt()
}

/// zeta clamped away from 1, with a flag marking that the clamp fired.
/// Mean separations so large that their square overflows saturate to the
/// clamp as well (the ratio tends to 1 there).
pub(crate) fn zeta_clamped(p: &Gaussian1D, q: &Gaussian1D) -> (f64, bool) {
    let zeta = fisher_rao_zeta(p, q);
    if zeta.is_nan() || zeta > ZETA_CLAMP {
        (ZETA_CLAMP, true)
    } else {
        (zeta, false)
    }
}

/// Geodesic distance on the Gaussian parameter manifold under the Fisher
/// information metric: 2 sqrt(2) atanh(zeta).
pub fn fisher_rao_distance(p: &Gaussian1D, q: &Gaussian1D) -> f64 {
    let (zeta, _) = zeta_clamped(p, q);
    2.0 * std::f64::consts::SQRT_2 * zeta.atanh()
}

/// Hyperbolic distance between the measures embedded in the half-plane:
/// 2 atanh(zeta), i.e. the Fisher-Rao distance rescaled by 1/sqrt(2).
pub fn half_plane_distance(p: &Gaussian1D, q: &Gaussian1D) -> f64 {
    let (zeta, _) = zeta_clamped(p, q);
    2.0 * zeta.atanh()
}

/// Embed a Gaussian into the half-plane as z = mu / sqrt(2) + i sigma.
///
/// This is the unique natural embedding for which the induced half-plane
/// distance reproduces 2 atanh(zeta); the identity
/// |z_p - z_q| / |z_p - conj(z_q)| = zeta(p, q) holds pointwise.
pub fn embed_half_plane(p: &Gaussian1D) -> HalfPlanePoint {
    HalfPlanePoint {
        z: Complex64::new(p.mu() / std::f64::consts::SQRT_2, p.sigma()),
    }
}

impl MobiusMap {
    /// Apply the conformal map to a half-plane point. The image lies in the
    /// open unit disc; kappa itself maps to the center.
    pub fn to_disc(&self, z: HalfPlanePoint) -> Result<DiscPoint> {
        let kappa = self.kappa.z;
        let denom = z.z - kappa.conj();
        // Im(z - conj(kappa)) = Im z + Im kappa > 0, so this can only fire
        // on under/overflow of the complex arithmetic.
        if denom.norm_sqr() < f64::MIN_POSITIVE {
            return Err(Error::NumericalOverflow);
        }
        let w = Complex64::from_polar(1.0, self.theta) * (z.z - kappa) / denom;
        if !w.re.is_finite() || !w.im.is_finite() || w.norm_sqr() >= 1.0 {
            return Err(Error::NumericalOverflow);
        }
        Ok(DiscPoint { z: w })
    }
}

/// Alias for [`MobiusMap::to_disc`] in free-function form.
pub fn to_disc(m: &MobiusMap, z: HalfPlanePoint) -> Result<DiscPoint> {
    m.to_disc(z)
}

/// Hyperbolic distance on the unit disc:
/// 2 atanh(|x - y| / |1 - conj(x) y|).
pub fn disc_distance(x: DiscPoint, y: DiscPoint) -> f64 {
    let num = (x.z - y.z).norm();
    let den = (Complex64::new(1.0, 0.0) - x.z.conj() * y.z).norm();
    let r = (num / den).min(ZETA_CLAMP);
    2.0 * r.atanh()
}

/// The isometric invariant of the disc,
/// 2 |x - y|^2 / ((1 - |x|^2)(1 - |y|^2)),
/// invariant under disc automorphisms and equal to cosh(d_D) - 1.
pub fn psi_geometric(x: DiscPoint, y: DiscPoint) -> f64 {
    let diff = (x.z - y.z).norm_sqr();
    2.0 * diff / ((1.0 - x.z.norm_sqr()) * (1.0 - y.z.norm_sqr()))
}

/// Apply a disc automorphism: e^{i phi} (z - a) / (1 - conj(a) z).
pub fn apply_disc_automorphism(eta: &DiscAutomorphism, z: DiscPoint) -> DiscPoint {
    let a = eta.a.z;
    let w = Complex64::from_polar(1.0, eta.phi) * (z.z - a)
        / (Complex64::new(1.0, 0.0) - a.conj() * z.z);
    DiscPoint::from_complex_unchecked(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::{random_disc_point, random_gaussian, TestRng};
    use proptest::prelude::*;

    fn g(mu: f64, sigma: f64) -> Gaussian1D {
        Gaussian1D::new(mu, sigma).unwrap()
    }

    #[test]
    fn half_plane_rejects_lower_half() {
        assert!(HalfPlanePoint::new(0.0, 0.0).is_err());
        assert!(HalfPlanePoint::new(1.0, -0.5).is_err());
        assert!(HalfPlanePoint::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn disc_rejects_boundary() {
        assert!(DiscPoint::new(1.0, 0.0).is_err());
        assert!(DiscPoint::new(0.8, 0.8).is_err());
        assert!(DiscPoint::new(0.99, 0.0).is_ok());
    }

    #[test]
    fn zeta_zero_iff_equal() {
        let p = g(1.2, 0.7);
        assert_eq!(fisher_rao_zeta(&p, &p), 0.0);
        assert!(fisher_rao_zeta(&p, &g(1.2, 0.7001)) > 0.0);
    }

    #[test]
    fn zeta_sigma_ratio_e() {
        let z = fisher_rao_zeta(&g(0.4, 1.0), &g(0.4, std::f64::consts::E));
        let expected = (std::f64::consts::E - 1.0) / (std::f64::consts::E + 1.0);
        assert!((z - expected).abs() < 1e-15);
    }

    #[test]
    fn zeta_equal_sigmas_closed_form() {
        // equal sigmas: |dmu| / sqrt(dmu^2 + 8 sigma^2)
        for (dmu, s) in [(1.0, 0.5), (3.0, 2.0), (0.2, 1.0)] {
            let z = fisher_rao_zeta(&g(0.0, s), &g(dmu, s));
            let expected = dmu / (dmu * dmu + 8.0 * s * s).sqrt();
            assert!((z - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn fisher_rao_sigma_ratio_e_is_sqrt2() {
        // 2 sqrt(2) atanh((e-1)/(e+1)) = sqrt(2) log e = sqrt(2)
        let d = fisher_rao_distance(&g(-2.0, 0.5), &g(-2.0, 0.5 * std::f64::consts::E));
        assert!((d - std::f64::consts::SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn half_plane_distance_log_sigma_ratio() {
        let d = half_plane_distance(&g(3.0, 2.0), &g(3.0, 2.0 * std::f64::consts::E));
        assert!((d - 1.0).abs() < 1e-14);
    }

    #[test]
    fn distance_scaling_and_symmetry() {
        let mut rng = TestRng::new(9);
        for _ in 0..100 {
            let p = random_gaussian(&mut rng, -3.0, 3.0, 0.3, 3.0);
            let q = random_gaussian(&mut rng, -3.0, 3.0, 0.3, 3.0);
            let dm = fisher_rao_distance(&p, &q);
            let dw = half_plane_distance(&p, &q);
            assert_eq!(dm, fisher_rao_distance(&q, &p));
            // both are one rounding of the same real product, so the
            // rescaling holds bit-exactly
            assert_eq!(dm, std::f64::consts::SQRT_2 * dw);
        }
    }

    #[test]
    fn distances_finite_under_mean_overflow() {
        // dmu^2 overflows to infinity here; the ratio saturates to the
        // clamp instead of going NaN
        let d = fisher_rao_distance(&g(-1e308, 1.0), &g(1e308, 1.0));
        assert!(d.is_finite() && d > 0.0);
    }

    #[test]
    fn distance_continuous_at_equal_parameter_boundaries() {
        // the single zeta formula extends continuously to equal means and
        // equal deviations
        let base = fisher_rao_distance(&g(1.0, 0.8), &g(1.0, 1.9));
        let nudged = fisher_rao_distance(&g(1.0, 0.8), &g(1.0 + 1e-9, 1.9));
        assert!((base - nudged).abs() < 1e-9);
        let base = fisher_rao_distance(&g(0.0, 1.3), &g(2.5, 1.3));
        let nudged = fisher_rao_distance(&g(0.0, 1.3), &g(2.5, 1.3 + 1e-9));
        assert!((base - nudged).abs() < 1e-9);
    }

    #[test]
    fn embedding_examples() {
        let z = embed_half_plane(&g(0.0, 1.0));
        assert_eq!(z.z(), Complex64::new(0.0, 1.0));
        let z = embed_half_plane(&g(std::f64::consts::SQRT_2, 2.0));
        assert!((z.z() - Complex64::new(1.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn embedding_ratio_reproduces_zeta() {
        let mut rng = TestRng::new(17);
        for _ in 0..100 {
            let p = random_gaussian(&mut rng, -3.0, 3.0, 0.3, 3.0);
            let q = random_gaussian(&mut rng, -3.0, 3.0, 0.3, 3.0);
            let zp = embed_half_plane(&p).z();
            let zq = embed_half_plane(&q).z();
            let ratio = (zp - zq).norm() / (zp - zq.conj()).norm();
            assert!((ratio - fisher_rao_zeta(&p, &q)).abs() <= 1e-12);
        }
    }

    #[test]
    fn mobius_theta_is_canonicalized() {
        let kappa = HalfPlanePoint::new(0.0, 1.0).unwrap();
        let m = MobiusMap::new(kappa, 7.0).unwrap();
        assert!((m.theta() - (7.0 - std::f64::consts::TAU)).abs() < 1e-15);
        assert!(MobiusMap::new(kappa, f64::INFINITY).is_err());
    }

    #[test]
    fn mobius_center_and_known_image() {
        let m = MobiusMap::default();
        let i = HalfPlanePoint::new(0.0, 1.0).unwrap();
        assert!(m.to_disc(i).unwrap().z().norm() < 1e-16);
        // (2i - i)/(2i + i) = 1/3
        let z = HalfPlanePoint::new(0.0, 2.0).unwrap();
        let w = m.to_disc(z).unwrap().z();
        assert!((w - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn disc_distance_examples() {
        let o = DiscPoint::new(0.0, 0.0).unwrap();
        let h = DiscPoint::new(0.5, 0.0).unwrap();
        assert_eq!(disc_distance(o, o), 0.0);
        assert!((disc_distance(o, h) - 3.0f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn psi_geometric_examples() {
        let o = DiscPoint::new(0.0, 0.0).unwrap();
        let h = DiscPoint::new(0.5, 0.0).unwrap();
        assert_eq!(psi_geometric(o, o), 0.0);
        assert!((psi_geometric(o, h) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn automorphism_identity_and_center_shift() {
        let z = DiscPoint::new(0.3, -0.4).unwrap();
        let id = DiscAutomorphism::new(DiscPoint::new(0.0, 0.0).unwrap(), 0.0).unwrap();
        assert_eq!(apply_disc_automorphism(&id, z).z(), z.z());
        let shift = DiscAutomorphism::new(z, 1.3).unwrap();
        assert!(apply_disc_automorphism(&shift, z).z().norm() < 1e-16);
    }

    #[test]
    fn automorphism_inverse_roundtrips() {
        let mut rng = TestRng::new(23);
        for _ in 0..200 {
            let eta = DiscAutomorphism::new(
                random_disc_point(&mut rng, 0.9),
                rng.range(0.0, std::f64::consts::TAU),
            )
            .unwrap();
            let z = random_disc_point(&mut rng, 0.95);
            let back = apply_disc_automorphism(&eta.inverse(), apply_disc_automorphism(&eta, z));
            assert!((back.z() - z.z()).norm() < 1e-14);
        }
    }

    #[test]
    fn disc_distance_invariant_under_automorphisms() {
        let mut rng = TestRng::new(31);
        for _ in 0..200 {
            let eta = DiscAutomorphism::new(
                random_disc_point(&mut rng, 0.9),
                rng.range(0.0, std::f64::consts::TAU),
            )
            .unwrap();
            let x = random_disc_point(&mut rng, 0.95);
            let y = random_disc_point(&mut rng, 0.95);
            let d = disc_distance(x, y);
            let d_mapped = disc_distance(
                apply_disc_automorphism(&eta, x),
                apply_disc_automorphism(&eta, y),
            );
            assert!((d - d_mapped).abs() <= 1e-12, "{d} vs {d_mapped}");
        }
    }

    #[test]
    fn cosh_identity_random_pairs() {
        let mut rng = TestRng::new(37);
        for _ in 0..1000 {
            let x = random_disc_point(&mut rng, 0.9);
            let y = random_disc_point(&mut rng, 0.9);
            let lhs = psi_geometric(x, y);
            let rhs = disc_distance(x, y).cosh() - 1.0;
            assert!((lhs - rhs).abs() <= 1e-11, "{lhs} vs {rhs}");
        }
    }

    #[test]
    fn chain_matches_half_plane_distance() {
        let mut rng = TestRng::new(41);
        for _ in 0..200 {
            let p = random_gaussian(&mut rng, -3.0, 3.0, 0.5, 2.0);
            let q = random_gaussian(&mut rng, -3.0, 3.0, 0.5, 2.0);
            let kappa = HalfPlanePoint::new(rng.range(-2.0, 2.0), rng.range(0.5, 2.0)).unwrap();
            let m = MobiusMap::new(kappa, rng.range(0.0, std::f64::consts::TAU)).unwrap();
            let x = m.to_disc(embed_half_plane(&p)).unwrap();
            let y = m.to_disc(embed_half_plane(&q)).unwrap();
            let chained = disc_distance(x, y);
            let direct = half_plane_distance(&p, &q);
            assert!((chained - direct).abs() <= 1e-11, "{chained} vs {direct}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn to_disc_stays_in_disc(
            re in -50.0f64..50.0,
            im in 1e-3f64..50.0,
            kre in -5.0f64..5.0,
            kim in 1e-2f64..5.0,
            theta in 0.0f64..std::f64::consts::TAU,
        ) {
            let m = MobiusMap::new(HalfPlanePoint::new(kre, kim).unwrap(), theta).unwrap();
            let w = m.to_disc(HalfPlanePoint::new(re, im).unwrap()).unwrap();
            prop_assert!(w.z().norm() < 1.0);
        }

        #[test]
        fn automorphism_stays_in_disc(
            zr in -0.7f64..0.7,
            zi in -0.7f64..0.7,
            ar in -0.6f64..0.6,
            ai in -0.6f64..0.6,
            phi in 0.0f64..std::f64::consts::TAU,
        ) {
            let z = DiscPoint::new(zr, zi).unwrap();
            let a = DiscPoint::new(ar, ai).unwrap();
            let eta = DiscAutomorphism::new(a, phi).unwrap();
            prop_assert!(apply_disc_automorphism(&eta, z).z().norm() < 1.0);
        }
    }
}
