//! Divergences between Gaussian measures across three geometries.
//!
//! - **Spherical**: the Bhattacharyya coefficient/angle and the
//!   squared-Hellinger distance of square-root densities ([`spherical`]).
//! - **Hyperbolic parameter manifold**: the Fisher-Rao distance, the upper
//!   half-plane embedding, conformal maps onto the unit disc, the disc
//!   distance and the disc's isometric invariant ([`hyperbolic`]).
//! - **L2-embedded invariant**: the closed form of
//!   2 ||p - q||^2 / ((1 - ||p||^2)(1 - ||q||^2)) for Gaussian densities as
//!   L2 elements, univariate ([`psi`]) and multivariate ([`multivariate`]),
//!   including Brownian time evolution and large-variance limits.
//!
//! Every closed form is backed by an independent numerical route in
//! [`oracle`] (adaptive Simpson quadrature, Gauss-Hermite tensor grids,
//! seeded Monte-Carlo) that the test suites and the CLI `verify` command
//! compare against.
//!
//! All types are immutable after construction and all operations are pure
//! functions, so the whole crate is safe for concurrent use.

pub mod error;
pub mod gaussian;
pub mod hyperbolic;
pub mod multivariate;
pub mod oracle;
pub mod psi;
pub mod report;
pub mod spherical;

#[doc(hidden)]
pub mod testutil;

pub use error::{Error, Result};
pub use gaussian::{natural_params, pdf_1d, pdf_nd, DensityValue, Gaussian1D, GaussianND};
pub use hyperbolic::{
    apply_disc_automorphism, disc_distance, embed_half_plane, fisher_rao_distance,
    fisher_rao_zeta, half_plane_distance, psi_geometric, to_disc, DiscAutomorphism, DiscPoint,
    HalfPlanePoint, MobiusMap,
};
pub use multivariate::{
    direct_product_integrals, lambda_combined, product_integrals, psi_multivariate, ProductTerms,
};
pub use oracle::{
    integrate_1d, oracle_psi_1d, oracle_psi_nd, MonteCarloSettings, OracleEstimate,
    QuadratureSettings,
};
pub use psi::{
    brownian_psi, l2_norm_squared, lambda_term, psi_closed_form, psi_from_integrals,
    psi_limit_sigma, BrownianPair, PsiReport, PsiTrajectory, SIGMA_LOWER_BOUND,
};
pub use report::{divergence_report, DivergenceReport};
pub use spherical::{
    bhattacharyya_angle, bhattacharyya_coefficient, hellinger_squared, spherical_report,
    SphericalReport,
};
