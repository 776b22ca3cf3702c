//! Multivariate generalization of the embedded invariant through
//! natural-parameter log normalizers: the combined Lambda terms, the three
//! Gaussian product integrals in exponential form, and the invariant
//! assembled from them.

use nalgebra::Cholesky;

use crate::error::{Error, Result};
use crate::gaussian::{log_det_from_cholesky, natural_params, GaussianND};
use crate::psi::PsiReport;

/// Tolerance for the Cauchy-Schwarz consistency invariant on the product
/// integrals.
const CAUCHY_SCHWARZ_TOL: f64 = 1e-12;

/// The log normalizers of a pair and of the self/cross products, with the
/// integrals they encode:
/// int pq = exp(lambda_p + lambda_q - lambda_pq),
/// int p^2 = exp(2 lambda_p - lambda_pp),
/// int q^2 = exp(2 lambda_q - lambda_qq).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductTerms {
    pub lambda_p: f64,
    pub lambda_q: f64,
    pub lambda_pq: f64,
    pub lambda_pp: f64,
    pub lambda_qq: f64,
    pub int_pq: f64,
    pub int_p2: f64,
    pub int_q2: f64,
}

/// Log normalizer of the (unnormalized) product density of two Gaussians:
/// with combined precision M = Sigma_a^-1 + Sigma_b^-1 and combined natural
/// mean muhat_ab = muhat_a + muhat_b,
///
/// Lambda_ab = -1/2 (n log 2pi - log|M| + muhat_ab^T M^-1 muhat_ab).
///
/// The quadratic form goes through a Cholesky solve of M; no inverse of M is
/// formed.
pub fn lambda_combined(a: &GaussianND, b: &GaussianND) -> Result<f64> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
    }
    let combined_precision = a.precision() + b.precision();
    let chol = Cholesky::new(combined_precision)
        .ok_or(Error::FactorizationFailure("combined precision is not positive-definite"))?;
    let log_det_precision = log_det_from_cholesky(&chol);
    let muhat = a.solve(a.mu()) + b.solve(b.mu());
    let quad = chol.solve(&muhat).dot(&muhat);
    Ok(-0.5 * (n as f64 * (2.0 * std::f64::consts::PI).ln() - log_det_precision + quad))
}

/// The three product integrals of a pair through the Lambda identities.
pub fn product_integrals(p: &GaussianND, q: &GaussianND) -> Result<ProductTerms> {
    let n = p.dim();
    if q.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q.dim() });
    }
    let (_, lambda_p) = natural_params(p);
    let (_, lambda_q) = natural_params(q);
    let lambda_pq = lambda_combined(p, q)?;
    let lambda_pp = lambda_combined(p, p)?;
    let lambda_qq = lambda_combined(q, q)?;
    let int_pq = (lambda_p + lambda_q - lambda_pq).exp();
    let int_p2 = (2.0 * lambda_p - lambda_pp).exp();
    let int_q2 = (2.0 * lambda_q - lambda_qq).exp();
    let bound = int_p2 * int_q2 + CAUCHY_SCHWARZ_TOL;
    if int_pq * int_pq > bound {
        return Err(Error::CauchySchwarzViolation { int_pq_sq: int_pq * int_pq, bound });
    }
    Ok(ProductTerms {
        lambda_p,
        lambda_q,
        lambda_pq,
        lambda_pp,
        lambda_qq,
        int_pq,
        int_p2,
        int_q2,
    })
}

/// The same three integrals by the direct algebraic route, used as an
/// independent cross-check of the Lambda identities:
/// int p^2 = (4 pi)^{-n/2} |Sigma_p|^{-1/2} and
/// int pq = (2 pi)^{-n/2} |Sigma_p + Sigma_q|^{-1/2}
///          exp(-1/2 dmu^T (Sigma_p + Sigma_q)^{-1} dmu).
pub fn direct_product_integrals(p: &GaussianND, q: &GaussianND) -> Result<(f64, f64, f64)> {
    let n = p.dim();
    if q.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: q.dim() });
    }
    let nf = n as f64;
    let int_p2 = (-0.5 * (nf * (4.0 * std::f64::consts::PI).ln() + p.log_det_sigma())).exp();
    let int_q2 = (-0.5 * (nf * (4.0 * std::f64::consts::PI).ln() + q.log_det_sigma())).exp();
    let sum = p.sigma() + q.sigma();
    let chol = Cholesky::new(sum)
        .ok_or(Error::FactorizationFailure("covariance sum is not positive-definite"))?;
    let dmu = p.mu() - q.mu();
    let quad = chol.solve(&dmu).dot(&dmu);
    let log_det_sum = log_det_from_cholesky(&chol);
    let int_pq =
        (-0.5 * (nf * (2.0 * std::f64::consts::PI).ln() + log_det_sum + quad)).exp();
    Ok((int_p2, int_q2, int_pq))
}

/// Multivariate embedded invariant in exponential form:
///
/// psi = 2 (e^{2Lp - Lpp} - 2 e^{Lp + Lq - Lpq} + e^{2Lq - Lqq})
///       / ((1 - e^{2Lp - Lpp})(1 - e^{2Lq - Lqq}))
///
/// Valid only while both squared norms stay below 1, which for dimension n
/// means |Sigma| > (4 pi)^{-n}; at n = 1 this is the usual
/// sigma > 1/(2 sqrt(pi)) condition.
pub fn psi_multivariate(p: &GaussianND, q: &GaussianND) -> Result<PsiReport> {
    let terms = product_integrals(p, q)?;
    if terms.int_p2 >= 1.0 {
        return Err(Error::InvalidNorm { quantity: "int_p2", value: terms.int_p2 });
    }
    if terms.int_q2 >= 1.0 {
        return Err(Error::InvalidNorm { quantity: "int_q2", value: terms.int_q2 });
    }
    let psi = if p.mu() == q.mu() && p.sigma() == q.sigma() {
        0.0
    } else {
        // grouped so the expression is exactly symmetric under swapping p, q
        let numerator = 2.0 * ((terms.int_p2 + terms.int_q2) - 2.0 * terms.int_pq);
        (numerator / ((1.0 - terms.int_p2) * (1.0 - terms.int_q2))).max(0.0)
    };
    Ok(PsiReport {
        psi,
        l2_norm_sq_p: terms.int_p2,
        l2_norm_sq_q: terms.int_q2,
        // sqrt(2) * int_pq, matching the univariate cross term at n = 1
        lambda: std::f64::consts::SQRT_2 * terms.int_pq,
        valid: true,
    })
}
