//! Brute-force numerical evaluation of every integral the closed forms
//! claim to solve: adaptive Simpson quadrature in one dimension,
//! Gauss-Hermite tensor grids and seeded Monte-Carlo in several.
//!
//! Nothing in this module calls a closed-form divergence; the whole point is
//! to provide an independent route for the cross-checks in the test suites
//! and the `verify` command.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gaussian::{pdf_1d, pdf_nd, Gaussian1D, GaussianND};

/// Controls for the adaptive Simpson integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    /// Absolute error target for the whole interval.
    pub abs_tol: f64,
    /// Maximum bisection depth per subinterval.
    pub max_depth: u32,
    /// Half-width of the integration support, in units of the largest
    /// standard deviation involved.
    pub support_halfwidth: f64,
}

impl QuadratureSettings {
    pub fn new(abs_tol: f64, max_depth: u32, support_halfwidth: f64) -> Result<Self> {
        if abs_tol.is_nan() || abs_tol <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "abs_tol",
                reason: format!("must be > 0, got {abs_tol}"),
            });
        }
        if max_depth < 10 {
            return Err(Error::InvalidParameter {
                name: "max_depth",
                reason: format!("must be >= 10, got {max_depth}"),
            });
        }
        if support_halfwidth.is_nan() || support_halfwidth <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "support_halfwidth",
                reason: format!("must be > 0, got {support_halfwidth}"),
            });
        }
        Ok(QuadratureSettings { abs_tol, max_depth, support_halfwidth })
    }
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        QuadratureSettings {
            abs_tol: 1e-12,
            max_depth: 60,
            support_halfwidth: 12.0,
        }
    }
}

/// Controls for the Monte-Carlo oracle. Runs are a pure function of these
/// settings: identical settings give bit-identical estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloSettings {
    pub samples: u64,
    pub seed: u64,
}

impl MonteCarloSettings {
    pub fn new(samples: u64, seed: u64) -> Result<Self> {
        if samples < 10_000 {
            return Err(Error::InvalidParameter {
                name: "samples",
                reason: format!("must be >= 10000, got {samples}"),
            });
        }
        Ok(MonteCarloSettings { samples, seed })
    }
}

impl Default for MonteCarloSettings {
    fn default() -> Self {
        MonteCarloSettings { samples: 10_000_000, seed: 0x9e3779b97f4a7c15 }
    }
}

/// Deterministic pseudo-random source: ChaCha8 words turned into uniform
/// doubles, with standard normals via the Box-Muller transform.
#[derive(Debug, Clone)]
pub struct SeededRng {
    rng: ChaCha8Rng,
    spare_normal: Option<f64>,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    /// Uniform double in [0, 1), using the top 53 bits of one word.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }

    /// Uniform double in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    /// Standard normal via Box-Muller; pairs are generated together and the
    /// spare is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let u1 = loop {
            let u = self.uniform();
            if u > 0.0 {
                break u;
            }
        };
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare_normal = Some(radius * angle.sin());
        radius * angle.cos()
    }
}

/// Integration interval covering every listed Gaussian out to
/// `support_halfwidth` standard deviations of the widest one. The mass left
/// outside is far below the quadrature tolerance.
pub fn support_interval(gaussians: &[&Gaussian1D], s: &QuadratureSettings) -> (f64, f64) {
    let mut mu_lo = f64::INFINITY;
    let mut mu_hi = f64::NEG_INFINITY;
    let mut sigma_max: f64 = 0.0;
    for g in gaussians {
        mu_lo = mu_lo.min(g.mu());
        mu_hi = mu_hi.max(g.mu());
        sigma_max = sigma_max.max(g.sigma());
    }
    (
        mu_lo - s.support_halfwidth * sigma_max,
        mu_hi + s.support_halfwidth * sigma_max,
    )
}

/// Bisection is forced at least this deep so that narrow integrands on a
/// wide support cannot slip between the initial sample points.
const MIN_DEPTH: u32 = 10;

struct SimpsonState<'f> {
    f: &'f dyn Fn(f64) -> f64,
    max_depth: u32,
    depth_exceeded: bool,
}

fn simpson_estimate(fa: f64, fm: f64, fb: f64, width: f64) -> f64 {
    width * (fa + 4.0 * fm + fb) / 6.0
}

#[allow(clippy::too_many_arguments)]
fn adaptive_step(
    st: &mut SimpsonState<'_>,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = (st.f)(lm);
    let frm = (st.f)(rm);
    let left = simpson_estimate(fa, flm, fm, m - a);
    let right = simpson_estimate(fm, frm, fb, b - m);
    let refined = left + right;
    let err = refined - whole;
    let converged = err.abs() <= 15.0 * tol;
    if depth >= MIN_DEPTH && (converged || depth >= st.max_depth) {
        if !converged {
            st.depth_exceeded = true;
        }
        // Richardson extrapolation of the two Simpson levels
        return refined + err / 15.0;
    }
    let half_tol = 0.5 * tol;
    adaptive_step(st, a, fa, m, fm, lm, flm, left, half_tol, depth + 1)
        + adaptive_step(st, m, fm, b, fb, rm, frm, right, half_tol, depth + 1)
}

/// Adaptive Simpson quadrature of `f` over [lo, hi] with recursive bisection
/// until the local error estimate fits within `abs_tol` scaled by the
/// interval fraction. Deterministic; errors with `MaxDepthExceeded`
/// (carrying the best available estimate) if some subinterval never
/// converges within `max_depth` levels.
pub fn integrate_1d(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    s: &QuadratureSettings,
) -> Result<f64> {
    QuadratureSettings::new(s.abs_tol, s.max_depth, s.support_halfwidth)?;
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::InvalidParameter {
            name: "support",
            reason: format!("empty interval [{lo}, {hi}]"),
        });
    }
    let mut st = SimpsonState { f: &f, max_depth: s.max_depth, depth_exceeded: false };
    let m = 0.5 * (lo + hi);
    let fa = f(lo);
    let fm = f(m);
    let fb = f(hi);
    let whole = simpson_estimate(fa, fm, fb, hi - lo);
    let value = adaptive_step(&mut st, lo, fa, hi, fb, m, fm, whole, s.abs_tol, 0);
    if st.depth_exceeded {
        return Err(Error::MaxDepthExceeded { partial: value });
    }
    Ok(value)
}

/// Quadrature of the square-root overlap integral of two densities.
pub fn oracle_sqrt_cross(p: &Gaussian1D, q: &Gaussian1D, s: &QuadratureSettings) -> Result<f64> {
    let (lo, hi) = support_interval(&[p, q], s);
    integrate_1d(
        |x| (pdf_1d(p, x).value() * pdf_1d(q, x).value()).sqrt(),
        lo,
        hi,
        s,
    )
}

/// Quadrature of the cross integral of two densities.
pub fn oracle_cross(p: &Gaussian1D, q: &Gaussian1D, s: &QuadratureSettings) -> Result<f64> {
    let (lo, hi) = support_interval(&[p, q], s);
    integrate_1d(|x| pdf_1d(p, x).value() * pdf_1d(q, x).value(), lo, hi, s)
}

/// Quadrature of the squared L2 norm of one density.
pub fn oracle_l2_norm_sq(g: &Gaussian1D, s: &QuadratureSettings) -> Result<f64> {
    let (lo, hi) = support_interval(&[g], s);
    integrate_1d(|x| pdf_1d(g, x).value().powi(2), lo, hi, s)
}

/// Quadrature of the squared L2 distance between two densities.
pub fn oracle_diff_sq(p: &Gaussian1D, q: &Gaussian1D, s: &QuadratureSettings) -> Result<f64> {
    let (lo, hi) = support_interval(&[p, q], s);
    integrate_1d(
        |x| (pdf_1d(p, x).value() - pdf_1d(q, x).value()).powi(2),
        lo,
        hi,
        s,
    )
}

/// The embedded invariant assembled from raw quadrature integrals only:
/// 2 * int (p - q)^2 / ((1 - int p^2)(1 - int q^2)). Never touches the
/// closed form.
pub fn oracle_psi_1d(p: &Gaussian1D, q: &Gaussian1D, s: &QuadratureSettings) -> Result<f64> {
    let int_p2 = oracle_l2_norm_sq(p, s)?;
    let int_q2 = oracle_l2_norm_sq(q, s)?;
    if int_p2 >= 1.0 {
        return Err(Error::InvalidNorm { quantity: "int_p2", value: int_p2 });
    }
    if int_q2 >= 1.0 {
        return Err(Error::InvalidNorm { quantity: "int_q2", value: int_q2 });
    }
    let diff_sq = oracle_diff_sq(p, q, s)?;
    Ok(2.0 * diff_sq / ((1.0 - int_p2) * (1.0 - int_q2)))
}

/// Gauss-Hermite nodes and weights for integrals against exp(-t^2),
/// computed by the Golub-Welsch eigenvalue method. Weights sum to sqrt(pi).
pub fn gauss_hermite(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let b = (k as f64 / 2.0).sqrt();
        jacobi[(k - 1, k)] = b;
        jacobi[(k, k - 1)] = b;
    }
    let eigen = SymmetricEigen::new(jacobi);
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let mut pairs: Vec<(f64, f64)> = (0..order)
        .map(|i| {
            let first = eigen.eigenvectors[(0, i)];
            (eigen.eigenvalues[i], sqrt_pi * first * first)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs.into_iter().unzip()
}

/// Tensor-grid Gauss-Hermite order per axis used by the grid oracle.
pub const GH_ORDER: usize = 64;

/// Dimension caps: tensor grids up to 3, Monte-Carlo up to 6.
pub const MAX_GRID_DIM: usize = 3;
pub const MAX_MC_DIM: usize = 6;

/// E_g[f(X)] by a tensor Gauss-Hermite grid centered on `g`:
/// pi^{-n/2} * sum of prod(w) * f(mu + sqrt(2) L t) over the grid.
pub fn gauss_hermite_mean(
    g: &GaussianND,
    f: impl Fn(&DVector<f64>) -> f64,
    order: usize,
) -> f64 {
    let n = g.dim();
    let (nodes, weights) = gauss_hermite(order);
    let l = g.cholesky_l();
    let mut index = vec![0usize; n];
    let mut t = DVector::<f64>::zeros(n);
    let mut acc = 0.0;
    loop {
        let mut w = 1.0;
        for (axis, &i) in index.iter().enumerate() {
            t[axis] = nodes[i];
            w *= weights[i];
        }
        let x = g.mu() + std::f64::consts::SQRT_2 * (&l * &t);
        acc += w * f(&x);
        // odometer increment over the multi-index
        let mut axis = 0;
        loop {
            if axis == n {
                return acc * std::f64::consts::PI.powf(-(n as f64) / 2.0);
            }
            index[axis] += 1;
            if index[axis] < order {
                break;
            }
            index[axis] = 0;
            axis += 1;
        }
    }
}

/// A Monte-Carlo (or grid) estimate with its standard error; grid results
/// carry no standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEstimate {
    pub value: f64,
    pub std_error: Option<f64>,
}

fn mc_mean(
    center: &GaussianND,
    f: impl Fn(&DVector<f64>) -> f64,
    samples: u64,
    rng: &mut SeededRng,
) -> OracleEstimate {
    let n = center.dim();
    let l = center.cholesky_l();
    let mut mean = 0.0;
    let mut m2 = 0.0;
    let mut z = DVector::<f64>::zeros(n);
    for k in 0..samples {
        for zi in z.iter_mut() {
            *zi = rng.normal();
        }
        let x = center.mu() + &l * &z;
        let v = f(&x);
        let delta = v - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (v - mean);
    }
    let var = m2 / (samples - 1) as f64;
    OracleEstimate {
        value: mean,
        std_error: Some((var / samples as f64).sqrt()),
    }
}

fn density(g: &GaussianND) -> impl Fn(&DVector<f64>) -> f64 + '_ {
    move |x| pdf_nd(g, x).expect("dimension checked by caller").value()
}

fn assemble_psi_nd(
    int_p2: OracleEstimate,
    int_q2: OracleEstimate,
    int_pq: OracleEstimate,
) -> Result<OracleEstimate> {
    let (a, b, c) = (int_p2.value, int_q2.value, int_pq.value);
    if a.is_nan() || a >= 1.0 {
        return Err(Error::InvalidNorm { quantity: "int_p2", value: a });
    }
    if b.is_nan() || b >= 1.0 {
        return Err(Error::InvalidNorm { quantity: "int_q2", value: b });
    }
    let denom = (1.0 - a) * (1.0 - b);
    let psi = 2.0 * (a - 2.0 * c + b) / denom;
    let std_error = match (int_p2.std_error, int_q2.std_error, int_pq.std_error) {
        (Some(se_a), Some(se_b), Some(se_c)) => {
            // first-order error propagation through the assembly
            let d_a = 2.0 / denom + psi / (1.0 - a);
            let d_b = 2.0 / denom + psi / (1.0 - b);
            let d_c = -4.0 / denom;
            Some(((d_a * se_a).powi(2) + (d_b * se_b).powi(2) + (d_c * se_c).powi(2)).sqrt())
        }
        _ => None,
    };
    Ok(OracleEstimate { value: psi, std_error })
}

/// Grid route of the multivariate oracle (dimension at most
/// [`MAX_GRID_DIM`]). The cross integral is evaluated against the narrower
/// measure so the tensor grid resolves the other density.
pub fn oracle_psi_nd_grid(p: &GaussianND, q: &GaussianND) -> Result<OracleEstimate> {
    let n = p.dim();
    if q.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q.dim() });
    }
    if n > MAX_GRID_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    let int_p2 = gauss_hermite_mean(p, density(p), GH_ORDER);
    let int_q2 = gauss_hermite_mean(q, density(q), GH_ORDER);
    let (narrow, wide) = if p.log_det_sigma() <= q.log_det_sigma() {
        (p, q)
    } else {
        (q, p)
    };
    let int_pq = gauss_hermite_mean(narrow, density(wide), GH_ORDER);
    assemble_psi_nd(
        OracleEstimate { value: int_p2, std_error: None },
        OracleEstimate { value: int_q2, std_error: None },
        OracleEstimate { value: int_pq, std_error: None },
    )
}

/// Monte-Carlo route of the multivariate oracle (dimension at most
/// [`MAX_MC_DIM`]): int pq = E_p[q(X)] with p as the importance proposal,
/// int p^2 = E_p[p(X)], int q^2 = E_q[q(Y)], all from one seeded stream.
pub fn oracle_psi_nd_mc(
    p: &GaussianND,
    q: &GaussianND,
    mc: &MonteCarloSettings,
) -> Result<OracleEstimate> {
    let n = p.dim();
    if q.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q.dim() });
    }
    if n > MAX_MC_DIM {
        return Err(Error::DimensionTooLarge(n));
    }
    MonteCarloSettings::new(mc.samples, mc.seed)?;
    let mut rng = SeededRng::new(mc.seed);
    let int_pq = mc_mean(p, density(q), mc.samples, &mut rng);
    let int_p2 = mc_mean(p, density(p), mc.samples, &mut rng);
    let int_q2 = mc_mean(q, density(q), mc.samples, &mut rng);
    assemble_psi_nd(int_p2, int_q2, int_pq)
}

/// Multivariate oracle for the embedded invariant: tensor-grid quadrature
/// when the dimension allows it, deterministic Monte-Carlo up to dimension
/// [`MAX_MC_DIM`], `DimensionTooLarge` beyond.
pub fn oracle_psi_nd(
    p: &GaussianND,
    q: &GaussianND,
    mc: &MonteCarloSettings,
) -> Result<OracleEstimate> {
    if p.dim() <= MAX_GRID_DIM && q.dim() <= MAX_GRID_DIM {
        oracle_psi_nd_grid(p, q)
    } else {
        oracle_psi_nd_mc(p, q, mc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testutil::rel_err;

    fn g(mu: f64, sigma: f64) -> Gaussian1D {
        Gaussian1D::new(mu, sigma).unwrap()
    }

    #[test]
    fn settings_validation() {
        assert!(QuadratureSettings::new(0.0, 60, 12.0).is_err());
        assert!(QuadratureSettings::new(1e-12, 5, 12.0).is_err());
        assert!(MonteCarloSettings::new(100, 1).is_err());
    }

    #[test]
    fn normalization_integrates_to_one() {
        let s = QuadratureSettings::default();
        for (mu, sigma) in [(0.0, 1.0), (3.0, 0.3), (-5.0, 4.0)] {
            let p = g(mu, sigma);
            let (lo, hi) = support_interval(&[&p], &s);
            let total = integrate_1d(|x| pdf_1d(&p, x).value(), lo, hi, &s).unwrap();
            assert!((total - 1.0).abs() <= 1e-10, "mu={mu} sigma={sigma}: {total}");
        }
    }

    #[test]
    fn l2_norm_of_standard() {
        let s = QuadratureSettings::default();
        let v = oracle_l2_norm_sq(&g(0.0, 1.0), &s).unwrap();
        assert!((v - 0.28209479177387814).abs() <= 1e-10);
    }

    #[test]
    fn diff_sq_of_identical_is_zero() {
        let s = QuadratureSettings::default();
        let v = oracle_diff_sq(&g(1.0, 0.7), &g(1.0, 0.7), &s).unwrap();
        assert!(v.abs() <= 1e-12);
    }

    #[test]
    fn polynomial_is_integrated_exactly() {
        let s = QuadratureSettings::default();
        let v = integrate_1d(|x| x * x * x - 2.0 * x + 1.0, -1.0, 3.0, &s).unwrap();
        // antiderivative x^4/4 - x^2 + x
        assert!((v - 16.0).abs() < 1e-11);
    }

    #[test]
    fn halving_tolerance_is_stable() {
        let coarse = QuadratureSettings { abs_tol: 2e-10, ..Default::default() };
        let fine = QuadratureSettings { abs_tol: 1e-10, ..Default::default() };
        let p = g(0.4, 0.6);
        let q = g(-1.0, 2.0);
        let a = oracle_cross(&p, &q, &coarse).unwrap();
        let b = oracle_cross(&p, &q, &fine).unwrap();
        assert!((a - b).abs() <= coarse.abs_tol);
    }

    #[test]
    fn max_depth_reports_partial() {
        let s = QuadratureSettings { abs_tol: 1e-14, max_depth: 11, ..Default::default() };
        // |x|^0.3 has a cusp the bisection cannot resolve at depth 11
        let err = integrate_1d(|x| x.abs().powf(0.3), -1.0, 1.1, &s).unwrap_err();
        match err {
            Error::MaxDepthExceeded { partial } => {
                assert!(partial.is_finite() && partial > 0.0)
            }
            other => panic!("expected MaxDepthExceeded, got {other:?}"),
        }
    }

    #[test]
    fn oracle_psi_1d_examples() {
        let s = QuadratureSettings::default();
        let v = oracle_psi_1d(&g(0.0, 1.0), &g(1.0, 1.0), &s).unwrap();
        assert!(rel_err(v, 0.4842888123147816) <= 1e-9, "{v}");
        let zero = oracle_psi_1d(&g(0.5, 1.3), &g(0.5, 1.3), &s).unwrap();
        assert!(zero.abs() <= 1e-10);
        // narrow but still valid deviations
        let v = oracle_psi_1d(&g(0.0, 0.3), &g(0.0, 0.4), &s).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn oracle_psi_1d_rejects_norm_at_one() {
        let s = QuadratureSettings::default();
        let err = oracle_psi_1d(&g(0.0, 0.2), &g(0.0, 1.0), &s).unwrap_err();
        assert!(matches!(err, Error::InvalidNorm { quantity: "int_p2", .. }));
    }

    #[test]
    fn gauss_hermite_weights_sum_to_sqrt_pi() {
        for order in [8, 32, GH_ORDER] {
            let (nodes, weights) = gauss_hermite(order);
            assert_eq!(nodes.len(), order);
            let total: f64 = weights.iter().sum();
            assert!(rel_err(total, std::f64::consts::PI.sqrt()) < 1e-13);
            // nodes are sorted and symmetric
            for w in weights {
                assert!(w > 0.0);
            }
            for i in 1..order {
                assert!(nodes[i] > nodes[i - 1]);
            }
            assert!((nodes[0] + nodes[order - 1]).abs() < 1e-10);
        }
    }

    #[test]
    fn gauss_hermite_integrates_moments() {
        // against exp(-t^2): int t^2 = sqrt(pi)/2, int t^4 = 3 sqrt(pi)/4
        let (nodes, weights) = gauss_hermite(GH_ORDER);
        let m2: f64 = nodes.iter().zip(&weights).map(|(t, w)| w * t * t).sum();
        let m4: f64 = nodes.iter().zip(&weights).map(|(t, w)| w * t.powi(4)).sum();
        let sqrt_pi = std::f64::consts::PI.sqrt();
        assert!(rel_err(m2, sqrt_pi / 2.0) < 1e-12);
        assert!(rel_err(m4, 3.0 * sqrt_pi / 4.0) < 1e-12);
    }

    #[test]
    fn grid_oracle_l2_norm_2d() {
        // int p^2 for the standard 2d Gaussian is 1/(4 pi)
        let p = GaussianND::from_parts(&[0.0, 0.0], &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let v = gauss_hermite_mean(&p, |x| pdf_nd(&p, x).unwrap().value(), GH_ORDER);
        assert!(rel_err(v, 1.0 / (4.0 * std::f64::consts::PI)) < 1e-12);
    }

    #[test]
    fn mc_oracle_seed_determinism() {
        let p = GaussianND::from_parts(&[0.0, 0.0], &[1.0, 0.2, 0.2, 1.0]).unwrap();
        let q = GaussianND::from_parts(&[1.0, 0.0], &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let mc = MonteCarloSettings { samples: 20_000, seed: 7 };
        let a = oracle_psi_nd_mc(&p, &q, &mc).unwrap();
        let b = oracle_psi_nd_mc(&p, &q, &mc).unwrap();
        assert_eq!(a.value, b.value);
        assert_eq!(a.std_error, b.std_error);
        let c = oracle_psi_nd_mc(&p, &q, &MonteCarloSettings { samples: 20_000, seed: 8 }).unwrap();
        assert_ne!(a.value, c.value);
    }

    #[test]
    fn mc_oracle_matches_grid_within_three_se() {
        let p = GaussianND::from_parts(&[0.0], &[1.0]).unwrap();
        let q = GaussianND::from_parts(&[1.0], &[2.0]).unwrap();
        let mc = MonteCarloSettings { samples: 200_000, seed: 11 };
        let grid = oracle_psi_nd_grid(&p, &q).unwrap();
        let sampled = oracle_psi_nd_mc(&p, &q, &mc).unwrap();
        let se = sampled.std_error.unwrap();
        assert!(
            (sampled.value - grid.value).abs() <= 3.0 * se,
            "grid {} vs mc {} (se {})",
            grid.value,
            sampled.value,
            se
        );
    }

    #[test]
    fn mc_oracle_p2_2d_within_three_se() {
        let p = GaussianND::from_parts(&[0.0, 0.0], &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let mc = MonteCarloSettings { samples: 100_000, seed: 13 };
        let mut rng = SeededRng::new(mc.seed);
        let est = super::mc_mean(&p, super::density(&p), mc.samples, &mut rng);
        let expected = 1.0 / (4.0 * std::f64::consts::PI);
        assert!((est.value - expected).abs() <= 3.0 * est.std_error.unwrap());
    }

    #[test]
    fn mc_oracle_brackets_closed_form_2d() {
        let p = GaussianND::from_parts(&[0.0, 0.0], &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let q = GaussianND::from_parts(&[1.0, 0.0], &[1.0, 0.0, 0.0, 4.0]).unwrap();
        let closed = crate::multivariate::psi_multivariate(&p, &q).unwrap().psi;
        let mc = MonteCarloSettings { samples: 400_000, seed: 17 };
        let est = oracle_psi_nd_mc(&p, &q, &mc).unwrap();
        let se = est.std_error.unwrap();
        assert!(
            (est.value - closed).abs() <= 3.0 * se,
            "closed {closed} vs mc {} (se {se})",
            est.value
        );
    }

    #[test]
    fn dispatch_rejects_large_dimension() {
        let eye7: Vec<f64> = (0..49)
            .map(|k| if k % 8 == 0 { 1.0 } else { 0.0 })
            .collect();
        let p = GaussianND::from_parts(&[0.0; 7], &eye7).unwrap();
        let err = oracle_psi_nd(&p, &p, &MonteCarloSettings::default()).unwrap_err();
        assert!(matches!(err, Error::DimensionTooLarge(7)));
    }

    #[test]
    fn box_muller_moments() {
        let mut rng = SeededRng::new(99);
        let n = 200_000;
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for _ in 0..n {
            let z = rng.normal();
            sum += z;
            sum_sq += z * z;
        }
        let mean = sum / n as f64;
        let var = sum_sq / n as f64 - mean * mean;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }
}
