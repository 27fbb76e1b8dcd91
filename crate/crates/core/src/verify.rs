//! Quadrature checks of the integral identities and inequalities.
//!
//! All reductions go through [`SurfaceCloud::integrate`], which uses
//! pairwise summation, so results are bit-stable.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::ambient::WarpedSpace;
use crate::quadrature::{pairwise_sum, ConvergenceOrder};
use crate::radial::RadialFn;
use crate::surfaces::{SurfaceCloud, SurfaceSample};
use crate::symfun::{binomial, newton_spectrum, normalized_hs, restricted_h, sigmas};
use crate::{Error, Result};

/// Default tolerance for checks fed by closed-form curvature.
pub const CLOSED_FORM_TOL: f64 = 1e-9;
/// Default tolerance for checks fed by engine-derived curvature.
pub const ENGINE_TOL: f64 = 1e-6;

/// `lhs - rhs` of an integral identity on one grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub area: f64,
    /// `residual / max(|lhs|, |rhs|, area)`.
    pub relative: f64,
    pub resolution: usize,
    /// Filled by [`IdentityResidual::with_coarse`].
    pub order: Option<ConvergenceOrder>,
}

impl IdentityResidual {
    pub fn new(lhs: f64, rhs: f64, area: f64, resolution: usize) -> Self {
        let residual = lhs - rhs;
        let scale = lhs.abs().max(rhs.abs()).max(area);
        Self { lhs, rhs, residual, area, relative: residual / scale, resolution, order: None }
    }

    /// Attaches the empirical order measured against a grid of half the
    /// resolution.
    pub fn with_coarse(mut self, coarse: &IdentityResidual) -> Self {
        self.order = Some(ConvergenceOrder::estimate(coarse.relative, self.relative));
        self
    }
}

fn check_order(k: usize, lo: usize, hi: usize) -> Result<()> {
    if k < lo || k > hi {
        return Err(Error::OrderOutOfRange { k, max: hi });
    }
    Ok(())
}

fn check_dims(cloud: &SurfaceCloud, space: &WarpedSpace) -> Result<()> {
    if cloud.n != space.n() {
        return Err(Error::Incompatible(format!("cloud in dimension {}, space in {}", cloud.n, space.n())));
    }
    Ok(())
}

/// `∫ H_j = ∫ H_{j+1} p` in Euclidean space, `0 <= j <= n - 2`.
pub fn classical_hm_residual(cloud: &SurfaceCloud, space: &WarpedSpace, j: usize) -> Result<IdentityResidual> {
    check_dims(cloud, space)?;
    if !space.is_euclidean() {
        return Err(Error::Incompatible("the classical formula is Euclidean".into()));
    }
    check_order(j, 0, cloud.n - 2)?;
    let lhs = cloud.integrate(|s| normalized_hs(&s.lambdas)[j]);
    let rhs = cloud.integrate(|s| normalized_hs(&s.lambdas)[j + 1] * s.support);
    Ok(IdentityResidual::new(lhs, rhs, cloud.area(), cloud.resolution))
}

/// Pointwise pieces of the weighted formula at one sample.
struct WeightedTerms {
    /// `φ (f H_{k-1} - H_k p)`.
    minkowski: f64,
    /// `φ div T_{k-1}(ξ) / (k C(n-1,k))`.
    div_t: f64,
    /// `h φ' Σ Λ_j dr_e[j]² / (k C(n-1,k))`, i.e. `⟨T_{k-1} ξ, ∇φ⟩` scaled.
    gradient: f64,
}

fn weighted_terms(s: &SurfaceSample, space: &WarpedSpace, k: usize, phi: &dyn RadialFn) -> Result<WeightedTerms> {
    let n = space.n();
    let m = n - 1;
    let w = space.warp(s.r)?;
    let hs = normalized_hs(&s.lambdas);
    let norm = (k as u64 * binomial(m as u64, k as u64)) as f64;
    let phi_v = phi.value(s.r);
    let minkowski = phi_v * (w.dh * hs[k - 1] - hs[k] * s.support);
    let div_t = if k == 1 {
        0.0
    } else {
        let beta = space.ricci_coeffs(s.r)?.beta;
        let coeff = binomial((n - 3) as u64, (k - 2) as u64) as f64;
        let mut sum = 0.0;
        for (j, d) in s.dr_e.iter().enumerate() {
            sum += restricted_h(k - 2, j, &s.lambdas)? * d * d;
        }
        coeff * beta * w.h * s.dr_nu * sum
    };
    let spectrum = newton_spectrum(k - 1, &s.lambdas)?;
    let quad: f64 = spectrum.eigenvalues.iter().zip(&s.dr_e).map(|(l, d)| l * d * d).sum();
    let gradient = w.h * phi.derivative(s.r) * quad;
    Ok(WeightedTerms { minkowski, div_t: phi_v * div_t / norm, gradient: gradient / norm })
}

fn collect_terms(cloud: &SurfaceCloud, space: &WarpedSpace, k: usize, phi: &dyn RadialFn) -> Result<Vec<WeightedTerms>> {
    check_dims(cloud, space)?;
    check_order(k, 1, cloud.n - 1)?;
    cloud.samples.iter().map(|s| weighted_terms(s, space, k, phi)).collect()
}

/// Weighted Minkowski identity
/// `∫ φ (f H_{k-1} - H_k p) + c ∫ φ div T_{k-1}(ξ) = -c ∫ ⟨T_{k-1} ξ, ∇φ⟩`
/// with `c = 1 / (k C(n-1,k))`. The divergence term is evaluated from the
/// Ricci structure of the warped metric, never by differentiating `T`.
pub fn weighted_hm_residual(
    cloud: &SurfaceCloud,
    space: &WarpedSpace,
    k: usize,
    phi: &dyn RadialFn,
) -> Result<IdentityResidual> {
    let terms = collect_terms(cloud, space, k, phi)?;
    let weighted = |f: &dyn Fn(&WeightedTerms) -> f64| {
        let v: Vec<f64> = terms.iter().zip(&cloud.samples).map(|(t, s)| s.weight * f(t)).collect();
        pairwise_sum(&v)
    };
    let lhs = weighted(&|t| t.minkowski) + weighted(&|t| t.div_t);
    let rhs = -weighted(&|t| t.gradient);
    Ok(IdentityResidual::new(lhs, rhs, cloud.area(), cloud.resolution))
}

/// Integral of the surface divergence of `φ T_{k-1} ξ`, written as the sum
/// `(n-k) f σ_{k-1} φ - k σ_k φ p + φ div T_{k-1}(ξ) + ⟨T_{k-1} ξ, ∇φ⟩`,
/// scaled by `1 / (k C(n-1,k))`. It vanishes on closed surfaces and equals
/// the weighted residual up to reassociation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceCheck {
    pub value: f64,
    /// `value / area`.
    pub relative: f64,
    /// `|value - weighted residual| / max(|lhs|, |rhs|, area)`.
    pub agreement: f64,
}

pub fn divergence_theorem_check(
    cloud: &SurfaceCloud,
    space: &WarpedSpace,
    k: usize,
    phi: &dyn RadialFn,
) -> Result<DivergenceCheck> {
    let terms = collect_terms(cloud, space, k, phi)?;
    let n = space.n();
    let norm = (k as u64 * binomial((n - 1) as u64, k as u64)) as f64;
    let mut integrand = Vec::with_capacity(terms.len());
    for (t, s) in terms.iter().zip(&cloud.samples) {
        let sig = sigmas(&s.lambdas);
        let w = space.warp(s.r)?;
        let phi_v = phi.value(s.r);
        let first = (n - k) as f64 * w.dh * sig[k - 1] * phi_v;
        let second = -(k as f64) * sig[k] * phi_v * s.support;
        integrand.push(s.weight * ((first + second) / norm + t.div_t + t.gradient));
    }
    let value = pairwise_sum(&integrand);
    let area = cloud.area();
    let reference = weighted_hm_residual(cloud, space, k, phi)?;
    let scale = reference.lhs.abs().max(reference.rhs.abs()).max(area);
    Ok(DivergenceCheck { value, relative: value / area, agreement: (value - reference.residual).abs() / scale })
}

/// Outcome of a check with preconditions.
#[derive(Debug, Clone, PartialEq)]
pub enum CheckVerdict {
    Pass,
    Fail,
    Skipped(String),
}

impl CheckVerdict {
    pub fn label(&self) -> &'static str {
        match self {
            CheckVerdict::Pass => "pass",
            CheckVerdict::Fail => "fail",
            CheckVerdict::Skipped(_) => "skipped",
        }
    }
}

/// `-ξ^j Ric(e_j, ν) = β h dr_nu dr_e[j]²` over all samples and indices.
#[derive(Debug, Clone, PartialEq)]
pub struct XiRicCheck {
    pub min: f64,
    pub verdict: CheckVerdict,
}

/// Sign lemma for `-Ric(ξ, ν)`. The minimum is always computed; the verdict
/// is skipped when the cloud is not strictly star-shaped or the H4 quantity
/// is not positive on its radial range.
pub fn xi_ric_sign_check(cloud: &SurfaceCloud, space: &WarpedSpace, tol: f64) -> Result<XiRicCheck> {
    check_dims(cloud, space)?;
    let mut min = f64::INFINITY;
    let mut h4_min = f64::INFINITY;
    for s in &cloud.samples {
        h4_min = h4_min.min(space.h4_quantity(s.r)?);
        for (xi, d) in s.xi.iter().zip(&s.dr_e) {
            min = min.min(-xi * space.ric_mixed(s.r, *d, s.dr_nu)?);
        }
    }
    let star = cloud.star_shaped();
    let verdict = if !star.strict {
        CheckVerdict::Skipped(format!("not strictly star-shaped (min dr_nu = {:e})", star.min_dr_nu))
    } else if h4_min <= tol {
        CheckVerdict::Skipped(format!("H4 quantity not positive on the cloud (min = {h4_min:e})"))
    } else if min >= -tol {
        CheckVerdict::Pass
    } else {
        CheckVerdict::Fail
    };
    Ok(XiRicCheck { min, verdict })
}

/// `∫ f/H_1 - ∫ p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrendleGap {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub area: f64,
    /// `|gap| < tol · area`.
    pub near_equality: bool,
}

/// Heintze–Karcher gap. Needs `H_1 > 0` everywhere and an embedded cloud;
/// the ambient conditions H1–H3 are the caller's responsibility.
pub fn brendle_gap(cloud: &SurfaceCloud, space: &WarpedSpace, tol: f64) -> Result<BrendleGap> {
    check_dims(cloud, space)?;
    if !cloud.embedded {
        return Err(Error::HypothesisViolation { what: "embeddedness not guaranteed".into(), sample: None });
    }
    let mut quotient = Vec::with_capacity(cloud.len());
    for (i, s) in cloud.samples.iter().enumerate() {
        let h1 = normalized_hs(&s.lambdas)[1];
        if !(h1 > 0.0) {
            return Err(Error::HypothesisViolation { what: format!("H_1 = {h1:e} <= 0"), sample: Some(i) });
        }
        quotient.push(s.weight * space.potential(s.r)? / h1);
    }
    let lhs = pairwise_sum(&quotient);
    let rhs = cloud.integrate(|s| s.support);
    let area = cloud.area();
    let gap = lhs - rhs;
    Ok(BrendleGap { lhs, rhs, gap, area, near_equality: gap.abs() < tol * area })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::radial::{Constant, Polynomial};
    use crate::surfaces::{build_surface, build_surface_with, CurvatureSource, RadialGraph, SurfaceSpec};
    use core::f64::consts::PI;

    fn r_squared() -> Polynomial {
        Polynomial(alloc::vec![0.0, 0.0, 1.0])
    }

    #[test]
    fn classical_on_spheres() {
        let e3 = WarpedSpace::euclidean(3).unwrap();
        let unit = build_surface(&SurfaceSpec::Sphere { offset: 0.0, radius: 1.0 }, &e3, 16).unwrap();
        let r = classical_hm_residual(&unit, &e3, 0).unwrap();
        assert!((r.lhs - 4.0 * PI).abs() < 1e-10 && r.residual.abs() < 1e-10);
        let off = build_surface(&SurfaceSpec::Sphere { offset: 0.3, radius: 1.0 }, &e3, 16).unwrap();
        assert!(classical_hm_residual(&off, &e3, 0).unwrap().relative.abs() < 1e-8);
        let schw = WarpedSpace::schwarzschild(3, 1.0).unwrap();
        assert!(classical_hm_residual(&unit, &schw, 0).is_err());
        assert!(classical_hm_residual(&unit, &e3, 2).is_err());
    }

    #[test]
    fn weighted_vanishes_on_slices() {
        for n in [3, 4] {
            let space = WarpedSpace::schwarzschild(n, 1.0).unwrap();
            let cloud = build_surface(&SurfaceSpec::Slice { r0: 0.8 }, &space, 8).unwrap();
            for k in 1..n {
                let r = weighted_hm_residual(&cloud, &space, k, &Constant(1.0)).unwrap();
                assert!(r.residual.abs() <= 1e-12, "n={n} k={k}: {}", r.residual);
                let d = divergence_theorem_check(&cloud, &space, k, &r_squared()).unwrap();
                assert!(d.value.abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn weighted_on_centered_sphere() {
        let e3 = WarpedSpace::euclidean(3).unwrap();
        let cloud = build_surface(&SurfaceSpec::Sphere { offset: 0.0, radius: 1.0 }, &e3, 16).unwrap();
        let r = weighted_hm_residual(&cloud, &e3, 1, &r_squared()).unwrap();
        assert!(r.residual.abs() < 1e-9);
    }

    #[test]
    fn weighted_on_torus_and_divergence_agreement() {
        let e3 = WarpedSpace::euclidean(3).unwrap();
        let cloud = build_surface(&SurfaceSpec::Torus3 { r1: 2.0, r2: 0.5 }, &e3, 64).unwrap();
        for k in [1, 2] {
            let r = weighted_hm_residual(&cloud, &e3, k, &r_squared()).unwrap();
            assert!(r.relative.abs() < 1e-6, "k={k}: {r:?}");
            let d = divergence_theorem_check(&cloud, &e3, k, &r_squared()).unwrap();
            assert!(d.agreement <= 1e-12);
        }
    }

    #[test]
    fn weighted_on_schwarzschild_graph() {
        // nonzero div T term: the identity only closes with it included
        let space = WarpedSpace::schwarzschild(3, 1.0).unwrap();
        let g = RadialGraph::new(3, |w: &[f64]| 1.0 * (1.0 + 0.1 * w[2]));
        let cloud = build_surface(&SurfaceSpec::RadialGraph(g), &space, 24).unwrap();
        let r = weighted_hm_residual(&cloud, &space, 2, &r_squared()).unwrap();
        assert!(r.relative.abs() < 1e-5, "{r:?}");
        let check = xi_ric_sign_check(&cloud, &space, 1e-9).unwrap();
        assert_eq!(check.verdict, CheckVerdict::Pass);
        assert!(check.min >= 0.0);
    }

    #[test]
    fn sign_check_trivial_cases() {
        let e3 = WarpedSpace::euclidean(3).unwrap();
        let torus = build_surface(&SurfaceSpec::Torus3 { r1: 2.0, r2: 0.5 }, &e3, 16).unwrap();
        let c = xi_ric_sign_check(&torus, &e3, 1e-9).unwrap();
        assert_eq!(c.min, 0.0);
        assert!(matches!(c.verdict, CheckVerdict::Skipped(_)));
        let schw = WarpedSpace::schwarzschild(3, 1.0).unwrap();
        let slice = build_surface(&SurfaceSpec::Slice { r0: 0.5 }, &schw, 8).unwrap();
        let c = xi_ric_sign_check(&slice, &schw, 1e-9).unwrap();
        assert_eq!(c.min, 0.0);
        assert_eq!(c.verdict, CheckVerdict::Pass);
    }

    #[test]
    fn brendle_gap_cases() {
        let e3 = WarpedSpace::euclidean(3).unwrap();
        let sphere = build_surface(&SurfaceSpec::Sphere { offset: 0.0, radius: 1.3 }, &e3, 16).unwrap();
        let g = brendle_gap(&sphere, &e3, 1e-8).unwrap();
        assert!(g.near_equality);
        let schw = WarpedSpace::schwarzschild(3, 1.0).unwrap();
        let slice = build_surface(&SurfaceSpec::Slice { r0: 1.0 }, &schw, 8).unwrap();
        assert!(brendle_gap(&slice, &schw, 1e-8).unwrap().near_equality);
        let torus = build_surface(&SurfaceSpec::Torus3 { r1: 2.0, r2: 0.5 }, &e3, 64).unwrap();
        let g = brendle_gap(&torus, &e3, 1e-8).unwrap();
        assert!(g.gap > 10.0 * 1e-8 * g.area);
        let graph = RadialGraph::new(3, |_: &[f64]| 1.0);
        let cloud = build_surface_with(&SurfaceSpec::RadialGraph(graph), &e3, 8, CurvatureSource::Auto).unwrap();
        assert!(brendle_gap(&cloud, &e3, 1e-8).is_err());
    }
}
