//! Univariate and multivariate Gaussian measures with validated parameters.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so everything here is safe to share across threads.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::error::{Error, Result};

/// Maximum tolerated absolute asymmetry in a covariance matrix. Inputs
/// within this tolerance are symmetrized before factorization; anything
/// worse is rejected.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// A non-negative, finite probability density value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityValue(f64);

impl DensityValue {
    fn new(value: f64) -> Self {
        debug_assert!(value.is_finite() && value >= 0.0);
        DensityValue(value)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// A univariate Gaussian measure N(mu, sigma^2), parameterized by its mean
/// and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gaussian1D {
    mu: f64,
    sigma: f64,
}

impl Gaussian1D {
    /// Construct N(mu, sigma^2). `sigma` must be finite and strictly
    /// positive, `mu` finite.
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: format!("mean must be finite, got {mu}"),
            });
        }
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("standard deviation must be finite and > 0, got {sigma}"),
            });
        }
        Ok(Gaussian1D { mu, sigma })
    }

    /// The standard normal N(0, 1).
    pub fn standard() -> Self {
        Gaussian1D { mu: 0.0, sigma: 1.0 }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }
}

/// Density of a univariate Gaussian at `x`:
/// (1/(sigma sqrt(2 pi))) exp(-(x-mu)^2 / (2 sigma^2)).
pub fn pdf_1d(g: &Gaussian1D, x: f64) -> DensityValue {
    let z = (x - g.mu) / g.sigma;
    let norm = 1.0 / (g.sigma * (2.0 * std::f64::consts::PI).sqrt());
    DensityValue::new(norm * (-0.5 * z * z).exp())
}

/// A multivariate Gaussian measure N(mu, Sigma) with an SPD covariance.
///
/// The Cholesky factor, the precision matrix and log|Sigma| are computed
/// once at construction and cached; log-determinants always come from the
/// factor diagonal rather than a naive determinant.
#[derive(Debug, Clone)]
pub struct GaussianND {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    chol: Cholesky<f64, Dyn>,
    precision: DMatrix<f64>,
    log_det_sigma: f64,
}

impl GaussianND {
    /// Construct N(mu, Sigma). The covariance must be square with the
    /// mean's dimension, finite, symmetric within [`SYMMETRY_TOL`] and
    /// positive-definite (all Cholesky pivots > 0).
    pub fn new(mu: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: "dimension must be positive".to_string(),
            });
        }
        if sigma.nrows() != n || sigma.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: sigma.nrows().max(sigma.ncols()),
            });
        }
        if mu.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "mu",
                reason: "mean entries must be finite".to_string(),
            });
        }
        if sigma.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: "covariance entries must be finite".to_string(),
            });
        }
        let mut max_asym: f64 = 0.0;
        for i in 0..n {
            for j in 0..i {
                max_asym = max_asym.max((sigma[(i, j)] - sigma[(j, i)]).abs());
            }
        }
        if max_asym > SYMMETRY_TOL {
            return Err(Error::InvalidParameter {
                name: "sigma",
                reason: format!("covariance asymmetry {max_asym:e} exceeds {SYMMETRY_TOL:e}"),
            });
        }
        let symmetrized = (&sigma + sigma.transpose()) * 0.5;
        let chol = Cholesky::new(symmetrized.clone())
            .ok_or(Error::FactorizationFailure("covariance is not positive-definite"))?;
        let log_det_sigma = log_det_from_cholesky(&chol);
        let precision = chol.inverse();
        Ok(GaussianND {
            mu,
            sigma: symmetrized,
            chol,
            precision,
            log_det_sigma,
        })
    }

    /// Convenience constructor from plain slices (covariance row-major).
    pub fn from_parts(mu: &[f64], sigma_row_major: &[f64]) -> Result<Self> {
        let n = mu.len();
        if sigma_row_major.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                got: sigma_row_major.len(),
            });
        }
        let mu = DVector::from_column_slice(mu);
        let sigma = DMatrix::from_row_slice(n, n, sigma_row_major);
        GaussianND::new(mu, sigma)
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    /// Precision matrix Sigma^-1, computed from the Cholesky factor.
    pub fn precision(&self) -> &DMatrix<f64> {
        &self.precision
    }

    /// log |Sigma|, from the factor diagonal (log|Sigma^-1| = -log|Sigma|).
    pub fn log_det_sigma(&self) -> f64 {
        self.log_det_sigma
    }

    /// Solve Sigma y = b.
    pub fn solve(&self, b: &DVector<f64>) -> DVector<f64> {
        self.chol.solve(b)
    }

    /// Lower-triangular Cholesky factor L with Sigma = L L^T.
    pub fn cholesky_l(&self) -> DMatrix<f64> {
        self.chol.l()
    }
}

/// 2 * sum(log diag(L)) for a factorization A = L L^T.
pub(crate) fn log_det_from_cholesky(chol: &Cholesky<f64, Dyn>) -> f64 {
    let l = chol.l_dirty();
    let n = l.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        acc += l[(i, i)].ln();
    }
    2.0 * acc
}

/// Multivariate Gaussian density at `x`, evaluated through the Cholesky
/// solve of the quadratic form.
pub fn pdf_nd(g: &GaussianND, x: &DVector<f64>) -> Result<DensityValue> {
    let n = g.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let diff = x - &g.mu;
    let quad = g.solve(&diff).dot(&diff);
    let log_pdf =
        -0.5 * (n as f64 * (2.0 * std::f64::consts::PI).ln() + g.log_det_sigma + quad);
    Ok(DensityValue::new(log_pdf.exp()))
}

/// Natural-parameter representation: muhat = Sigma^-1 mu and the log
/// normalizer Lambda with
/// Lambda = -1/2 (n log 2pi - log|Sigma^-1| + muhat^T Sigma muhat),
/// so that the density equals exp(Lambda + muhat^T x - x^T Sigma^-1 x / 2).
pub fn natural_params(g: &GaussianND) -> (DVector<f64>, f64) {
    let muhat = g.solve(&g.mu);
    // muhat^T Sigma muhat = mu^T Sigma^-1 mu = <muhat, mu>
    let quad = muhat.dot(&g.mu);
    let n = g.dim() as f64;
    let lambda =
        -0.5 * (n * (2.0 * std::f64::consts::PI).ln() + g.log_det_sigma + quad);
    (muhat, lambda)
}

/// Density via the natural-parameter path:
/// exp(Lambda + muhat^T x - x^T Sigma^-1 x / 2).
pub fn pdf_nd_natural(g: &GaussianND, x: &DVector<f64>) -> Result<DensityValue> {
    let n = g.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.len(),
        });
    }
    let (muhat, lambda) = natural_params(g);
    let quad = g.solve(x).dot(x);
    Ok(DensityValue::new((lambda + muhat.dot(x) - 0.5 * quad).exp()))
}
