//! Radial profiles of pointwise quantities over a sample cloud.

use alloc::vec::Vec;

use super::{torus3_h1_printed, SurfaceCloud, SurfaceSample, SurfaceSpec};
use crate::symfun::normalized_hs;
use crate::{Error, Result};

/// Samples whose radii agree to this fraction of the radial range belong to
/// one symmetry orbit.
pub const ORBIT_TOL: f64 = 1e-9;

/// A quantity `Q` grouped by radius.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialProfile {
    /// `(r, mean Q)` per orbit, sorted by `r`.
    pub points: Vec<(f64, f64)>,
    /// Total quadrature weight of each orbit.
    pub weights: Vec<f64>,
    /// Largest in-orbit spread of `Q` divided by `range(Q)` (or by 1 when
    /// `Q` is constant).
    pub relative_spread: f64,
    pub range: f64,
    /// Smallest consecutive increment of the orbit means.
    pub min_increment: f64,
}

impl RadialProfile {
    pub fn is_radial(&self, tol: f64) -> bool {
        self.relative_spread <= tol
    }

    pub fn strictly_increasing(&self) -> bool {
        self.min_increment > 0.0
    }

    pub fn value_at_min_r(&self) -> Option<(f64, f64)> {
        self.points.first().copied()
    }

    pub fn value_at_max_r(&self) -> Option<(f64, f64)> {
        self.points.last().copied()
    }
}

/// Groups samples by radius and summarizes `Q` on each orbit.
pub fn radial_profile(cloud: &SurfaceCloud, q: impl Fn(&SurfaceSample) -> f64) -> Result<RadialProfile> {
    if cloud.is_empty() {
        return Err(Error::Precondition("empty cloud".into()));
    }
    let mut pairs: Vec<(f64, f64, f64)> = cloud.samples.iter().map(|s| (s.r, q(s), s.weight)).collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (rlo, rhi) = cloud.r_range();
    let r_tol = ORBIT_TOL * (rhi - rlo).max(1.0);
    let (qlo, qhi) = pairs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
    let range = qhi - qlo;

    let mut points = Vec::new();
    let mut weights = Vec::new();
    let mut max_spread = 0.0f64;
    let mut start = 0;
    while start < pairs.len() {
        let mut end = start + 1;
        while end < pairs.len() && pairs[end].0 - pairs[end - 1].0 <= r_tol {
            end += 1;
        }
        let group = &pairs[start..end];
        let (lo, hi) = group
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.1), hi.max(p.1)));
        max_spread = max_spread.max(hi - lo);
        let len = group.len() as f64;
        let r = group.iter().map(|p| p.0).sum::<f64>() / len;
        let mean = group.iter().map(|p| p.1).sum::<f64>() / len;
        points.push((r, mean));
        weights.push(group.iter().map(|p| p.2).sum());
        start = end;
    }
    let min_increment = points
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(f64::INFINITY, f64::min);
    let scale = if range > 0.0 { range } else { 1.0 };
    Ok(RadialProfile { points, weights, relative_spread: max_spread / scale, range, min_increment })
}

/// Torus counterexample data: `H_1(r)`, `(H_2/H_1)(r)` and, for the `R³`
/// torus, the geometric profile next to the printed closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusProfiles {
    pub h1: RadialProfile,
    pub ratio: RadialProfile,
    /// `(r, geometric H_1, printed H_1)`; empty for the `R⁴` torus.
    pub printed_comparison: Vec<(f64, f64, f64)>,
    pub thin: bool,
    /// Largest principal-curvature spread over the cloud.
    pub max_spread: f64,
}

impl TorusProfiles {
    pub fn non_umbilic(&self, tol: f64) -> bool {
        self.max_spread > tol
    }
}

pub fn torus_profiles(spec: &SurfaceSpec, cloud: &SurfaceCloud) -> Result<TorusProfiles> {
    let (r1, r2, is3) = match *spec {
        SurfaceSpec::Torus3 { r1, r2 } => (r1, r2, true),
        SurfaceSpec::Torus4 { r1, r2 } => (r1, r2, false),
        _ => return Err(Error::Incompatible("torus profiles need a torus".into())),
    };
    let h = |s: &SurfaceSample| normalized_hs(&s.lambdas);
    let h1 = radial_profile(cloud, |s| h(s)[1])?;
    let ratio = radial_profile(cloud, |s| {
        let hs = h(s);
        hs[2] / hs[1]
    })?;
    let printed_comparison = if is3 {
        h1.points.iter().map(|&(r, v)| (r, v, torus3_h1_printed(r1, r2, r))).collect()
    } else {
        Vec::new()
    };
    let max_spread = cloud.samples.iter().map(|s| s.lambdas.spread()).fold(0.0, f64::max);
    Ok(TorusProfiles { h1, ratio, printed_comparison, thin: spec.thin_flag().unwrap_or(false), max_spread })
}
