//! One-stop bundle of every divergence for a univariate pair.

use crate::error::{Error, Result};
use crate::gaussian::Gaussian1D;
use crate::hyperbolic::{
    disc_distance, embed_half_plane, fisher_rao_distance, half_plane_distance, zeta_clamped,
    MobiusMap,
};
use crate::psi::psi_closed_form;
use crate::spherical::spherical_report;

/// Every divergence of one (P, Q) pair, with validity flags.
///
/// The disc distance is computed through the full conformal chain (embed
/// into the half-plane, map onto the disc, measure there) rather than copied
/// from the half-plane value, so the bundle doubles as an end-to-end
/// consistency probe.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceReport {
    pub hellinger_sq: f64,
    pub bhattacharyya_coefficient: f64,
    pub bhattacharyya_angle: f64,
    pub fisher_rao: f64,
    pub half_plane: f64,
    pub disc: f64,
    /// The embedded invariant; absent when the validity conditions fail.
    pub psi: Option<f64>,
    pub psi_valid: bool,
    /// The error that invalidated psi, when psi is absent.
    pub psi_error: Option<Error>,
    /// Set when the Fisher-Rao ratio had to be clamped away from 1.
    pub near_boundary: bool,
}

/// Compute the full bundle. Only pathological conformal-map overflow can
/// fail here; an invalid psi is reported through the flags, not an error.
pub fn divergence_report(p: &Gaussian1D, q: &Gaussian1D) -> Result<DivergenceReport> {
    let spherical = spherical_report(p, q);
    let (_, near_boundary) = zeta_clamped(p, q);
    let map = MobiusMap::default();
    let x = map.to_disc(embed_half_plane(p))?;
    let y = map.to_disc(embed_half_plane(q))?;
    let (psi, psi_valid, psi_error) = match psi_closed_form(p, q) {
        Ok(report) => (Some(report.psi), true, None),
        Err(e) => (None, false, Some(e)),
    };
    Ok(DivergenceReport {
        hellinger_sq: spherical.hellinger_sq,
        bhattacharyya_coefficient: spherical.bc,
        bhattacharyya_angle: spherical.angle,
        fisher_rao: fisher_rao_distance(p, q),
        half_plane: half_plane_distance(p, q),
        disc: disc_distance(x, y),
        psi,
        psi_valid,
        psi_error,
        near_boundary,
    })
}
