//! Warped-product ambient spaces `N^{n-1} × [0, r̄)` with metric
//! `dr² + h(r)² g_N`, where `N` is the round unit sphere (`K = 1`).

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};
// float math for no_std builds; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Default tolerance for the H1–H4 checks.
pub const CONDITION_TOL: f64 = 1e-9;
/// Hemisphere sampling stops this far short of the equator.
pub const HEMISPHERE_MARGIN: f64 = 1e-6;
/// Default truncation of the radial domain for ODE-defined spaces.
pub const DEFAULT_ODE_EXTENT: f64 = 10.0;
const ODE_DRIFT_TOL: f64 = 1e-10;

/// Catalog entry a [`WarpedSpace`] was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpaceKind {
    Euclidean,
    Hyperbolic,
    SphericalHemisphere,
    /// `h' = sqrt(1 - 2m h^{2-n})`.
    Schwarzschild { mass: f64 },
    /// `h' = sqrt(1 - 2m h^{2-n} + q² h^{4-2n})`.
    ReissnerNordstrom { mass: f64, charge: f64 },
}

impl SpaceKind {
    pub fn name(&self) -> &'static str {
        match self {
            SpaceKind::Euclidean => "euclidean",
            SpaceKind::Hyperbolic => "hyperbolic",
            SpaceKind::SphericalHemisphere => "spherical_hemisphere",
            SpaceKind::Schwarzschild { .. } => "schwarzschild",
            SpaceKind::ReissnerNordstrom { .. } => "reissner_nordstrom",
        }
    }
}

/// `h`, `h'`, `h''` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WarpValues {
    pub h: f64,
    pub dh: f64,
    pub d2h: f64,
}

/// Profile `F(h) = 1 - 2m h^{2-n} + q² h^{4-2n}` with `h'² = F(h)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Profile {
    n: f64,
    mass: f64,
    charge: f64,
}

impl Profile {
    fn f(&self, h: f64) -> f64 {
        let u = h.powf(2.0 - self.n);
        1.0 - 2.0 * self.mass * u + self.charge * self.charge * u * u
    }

    /// `F'(h)`, so that `h'' = F'(h) / 2`.
    fn df(&self, h: f64) -> f64 {
        let n = self.n;
        2.0 * self.mass * (n - 2.0) * h.powf(1.0 - n)
            - self.charge * self.charge * (2.0 * n - 4.0) * h.powf(3.0 - 2.0 * n)
    }

    /// Largest root of `F`, i.e. the horizon value `h(0)`.
    fn horizon(&self) -> Result<f64> {
        let (m, q) = (self.mass, self.charge);
        if !(m > 0.0) {
            return Err(Error::InvalidSpace(format!("mass must be positive, got {m}")));
        }
        let disc = m * m - q * q;
        if !(disc > 0.0) {
            return Err(Error::InvalidSpace(format!(
                "no non-degenerate horizon: need m² > q², got m = {m}, q = {q}"
            )));
        }
        // smallest root u = h^{2-n} of 1 - 2m u + q² u², rationalized
        let u = 1.0 / (m + disc.sqrt());
        Ok(u.powf(1.0 / (2.0 - self.n)))
    }
}

/// Warping function tabulated by fixed-step RK4 on `h'' = F'(h)/2`,
/// `h(0) = h_0`, `h'(0) = 0`, with cubic Hermite dense output.
#[derive(Debug, Clone)]
struct OdeWarping {
    profile: Profile,
    step: f64,
    h: Vec<f64>,
    dh: Vec<f64>,
}

impl OdeWarping {
    fn integrate(profile: Profile, extent: f64) -> Result<Self> {
        let h0 = profile.horizon()?;
        if !(profile.df(h0) > 0.0) {
            return Err(Error::InvalidSpace("h''(0) is not positive at the horizon".into()));
        }
        let mut step = 1e-3;
        for _ in 0..6 {
            let table = Self::tabulate(profile, h0, extent, step);
            if table.max_drift() <= ODE_DRIFT_TOL {
                return Ok(table);
            }
            step *= 0.5;
        }
        Err(Error::InvalidSpace("ODE first integral drift did not reach tolerance".into()))
    }

    fn tabulate(profile: Profile, h0: f64, extent: f64, step: f64) -> Self {
        let steps = (extent / step).ceil() as usize + 1;
        let mut h = Vec::with_capacity(steps + 1);
        let mut dh = Vec::with_capacity(steps + 1);
        let (mut y, mut v) = (h0, 0.0);
        h.push(y);
        dh.push(v);
        let acc = |y: f64| 0.5 * profile.df(y);
        for _ in 0..steps {
            let (k1y, k1v) = (v, acc(y));
            let (k2y, k2v) = (v + 0.5 * step * k1v, acc(y + 0.5 * step * k1y));
            let (k3y, k3v) = (v + 0.5 * step * k2v, acc(y + 0.5 * step * k2y));
            let (k4y, k4v) = (v + step * k3v, acc(y + step * k3y));
            y += step / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
            v += step / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
            h.push(y);
            dh.push(v);
        }
        Self { profile, step, h, dh }
    }

    fn max_drift(&self) -> f64 {
        self.h
            .iter()
            .zip(&self.dh)
            .map(|(&h, &v)| (v * v - self.profile.f(h)).abs())
            .fold(0.0, f64::max)
    }

    fn extent(&self) -> f64 {
        (self.h.len() - 1) as f64 * self.step
    }

    fn eval(&self, r: f64) -> WarpValues {
        let s = r / self.step;
        let i = (s.floor() as usize).min(self.h.len() - 2);
        let t = s - i as f64;
        let (h00, h10, h01, h11) = hermite_basis(t);
        let d = self.step;
        let acc = |y: f64| 0.5 * self.profile.df(y);
        let h = h00 * self.h[i] + h10 * d * self.dh[i] + h01 * self.h[i + 1] + h11 * d * self.dh[i + 1];
        let dh = h00 * self.dh[i]
            + h10 * d * acc(self.h[i])
            + h01 * self.dh[i + 1]
            + h11 * d * acc(self.h[i + 1]);
        WarpValues { h, dh, d2h: acc(h) }
    }
}

fn hermite_basis(t: f64) -> (f64, f64, f64, f64) {
    let t2 = t * t;
    let t3 = t2 * t;
    (2.0 * t3 - 3.0 * t2 + 1.0, t3 - 2.0 * t2 + t, -2.0 * t3 + 3.0 * t2, t3 - t2)
}

#[derive(Debug, Clone)]
enum Warping {
    Linear,
    Sinh,
    Sin,
    Ode(OdeWarping),
}

/// Ambient space data. Immutable after construction.
#[derive(Debug, Clone)]
pub struct WarpedSpace {
    n: usize,
    fiber_curvature: f64,
    kind: SpaceKind,
    warping: Warping,
    r_max: f64,
    sample_max: f64,
}

/// Ricci tensor `Ric = -α ḡ - β dr²` at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicciCoefficients {
    pub alpha: f64,
    pub beta: f64,
}

/// Area of the unit sphere `S^{d}` in `R^{d+1}`.
pub fn unit_sphere_area(d: usize) -> f64 {
    match d {
        0 => 2.0,
        1 => 2.0 * PI,
        _ => 2.0 * PI / (d as f64 - 1.0) * unit_sphere_area(d - 2),
    }
}

impl WarpedSpace {
    /// Builds a catalog space. `extent` truncates unbounded domains of
    /// ODE-defined spaces (and is ignored by closed-form ones).
    pub fn new(kind: SpaceKind, n: usize, extent: Option<f64>) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSpace(format!("ambient dimension must be >= 3, got {n}")));
        }
        let nf = n as f64;
        let (warping, r_max, sample_max) = match kind {
            SpaceKind::Euclidean => (Warping::Linear, f64::INFINITY, f64::INFINITY),
            SpaceKind::Hyperbolic => (Warping::Sinh, f64::INFINITY, f64::INFINITY),
            SpaceKind::SphericalHemisphere => (Warping::Sin, FRAC_PI_2, FRAC_PI_2 - HEMISPHERE_MARGIN),
            SpaceKind::Schwarzschild { mass } => {
                let extent = extent.unwrap_or(DEFAULT_ODE_EXTENT);
                let ode = OdeWarping::integrate(Profile { n: nf, mass, charge: 0.0 }, extent)?;
                let end = ode.extent();
                (Warping::Ode(ode), end, extent)
            }
            SpaceKind::ReissnerNordstrom { mass, charge } => {
                let extent = extent.unwrap_or(DEFAULT_ODE_EXTENT);
                let ode = OdeWarping::integrate(Profile { n: nf, mass, charge }, extent)?;
                let end = ode.extent();
                (Warping::Ode(ode), end, extent)
            }
        };
        Ok(Self { n, fiber_curvature: 1.0, kind, warping, r_max, sample_max })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(SpaceKind::Euclidean, n, None)
    }
    pub fn hyperbolic(n: usize) -> Result<Self> {
        Self::new(SpaceKind::Hyperbolic, n, None)
    }
    pub fn spherical_hemisphere(n: usize) -> Result<Self> {
        Self::new(SpaceKind::SphericalHemisphere, n, None)
    }
    pub fn schwarzschild(n: usize, mass: f64) -> Result<Self> {
        Self::new(SpaceKind::Schwarzschild { mass }, n, None)
    }
    pub fn reissner_nordstrom(n: usize, mass: f64, charge: f64) -> Result<Self> {
        Self::new(SpaceKind::ReissnerNordstrom { mass, charge }, n, None)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn kind(&self) -> SpaceKind {
        self.kind
    }
    pub fn fiber_curvature(&self) -> f64 {
        self.fiber_curvature
    }
    /// End of the domain `r̄` (possibly infinite).
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    /// Largest radius used for sampling.
    pub fn sample_max(&self) -> f64 {
        self.sample_max
    }
    pub fn fiber_volume(&self) -> f64 {
        unit_sphere_area(self.n - 1)
    }
    pub fn is_euclidean(&self) -> bool {
        matches!(self.kind, SpaceKind::Euclidean)
    }

    pub fn warp(&self, r: f64) -> Result<WarpValues> {
        if !(r >= 0.0 && r < self.r_max) {
            return Err(Error::OutOfDomain { r, r_max: self.r_max });
        }
        Ok(match &self.warping {
            Warping::Linear => WarpValues { h: r, dh: 1.0, d2h: 0.0 },
            Warping::Sinh => WarpValues { h: r.sinh(), dh: r.cosh(), d2h: r.sinh() },
            Warping::Sin => WarpValues { h: r.sin(), dh: r.cos(), d2h: -r.sin() },
            Warping::Ode(ode) => ode.eval(r),
        })
    }

    /// Potential function `f = h'(r)`.
    pub fn potential(&self, r: f64) -> Result<f64> {
        Ok(self.warp(r)?.dh)
    }

    /// `h(r)`, the `∂_r` component of the conformal field `X = h ∂_r`.
    pub fn conformal_radial_component(&self, r: f64) -> Result<f64> {
        Ok(self.warp(r)?.h)
    }

    /// `h'(r)² - F(h(r))` for ODE-defined spaces; `None` for closed forms.
    pub fn first_integral_residual(&self, r: f64) -> Result<Option<f64>> {
        let w = self.warp(r)?;
        Ok(match &self.warping {
            Warping::Ode(ode) => Some(w.dh * w.dh - ode.profile.f(w.h)),
            _ => None,
        })
    }

    pub fn ricci_coeffs(&self, r: f64) -> Result<RicciCoefficients> {
        let w = self.warp(r)?;
        if w.h == 0.0 {
            return Err(Error::Singular { r });
        }
        let n2 = self.n as f64 - 2.0;
        let a = w.d2h / w.h;
        let b = (self.fiber_curvature - w.dh * w.dh) / (w.h * w.h);
        Ok(RicciCoefficients { alpha: a - n2 * b, beta: n2 * (a + b) })
    }

    /// `Ric(e, ν)` for ambient-orthonormal `e ⟂ ν` with radial components
    /// `dr_e`, `dr_nu`.
    pub fn ric_mixed(&self, r: f64, dr_e: f64, dr_nu: f64) -> Result<f64> {
        Ok(-self.ricci_coeffs(r)?.beta * dr_e * dr_nu)
    }

    /// `q(r) = 2h''/h - (n-2)(K - h'²)/h²`, the H3 quantity.
    pub fn h3_quantity(&self, r: f64) -> Result<f64> {
        let w = self.nonsingular(r)?;
        Ok(2.0 * w.d2h / w.h - (self.n as f64 - 2.0) * (self.fiber_curvature - w.dh * w.dh) / (w.h * w.h))
    }

    /// `h''/h + (K - h'²)/h²`, the H4 quantity.
    pub fn h4_quantity(&self, r: f64) -> Result<f64> {
        let w = self.nonsingular(r)?;
        Ok(w.d2h / w.h + (self.fiber_curvature - w.dh * w.dh) / (w.h * w.h))
    }

    fn nonsingular(&self, r: f64) -> Result<WarpValues> {
        let w = self.warp(r)?;
        if w.h == 0.0 {
            return Err(Error::Singular { r });
        }
        Ok(w)
    }

    /// `n` evenly spaced radii inside `(0, sample_max)`; unbounded domains
    /// are cut at `cap`.
    pub fn default_grid(&self, n: usize, cap: f64) -> Vec<f64> {
        crate::radial::open_grid(0.0, self.sample_max.min(cap), n)
    }

    pub fn check_conditions(&self, grid: &[f64], tol: f64) -> Result<ConditionReport> {
        if grid.is_empty() {
            return Err(Error::Precondition("condition grid is empty".into()));
        }
        let origin = self.warp(0.0)?;
        let h1 = ConditionVerdict {
            pass: origin.dh.abs() <= tol && origin.d2h > tol,
            margin: origin.d2h,
            detail: origin.dh,
        };
        let mut dh_min = f64::INFINITY;
        let mut q_values = Vec::with_capacity(grid.len());
        let mut h4_values = Vec::with_capacity(grid.len());
        for &r in grid {
            if !(r > 0.0) {
                return Err(Error::OutOfDomain { r, r_max: self.r_max });
            }
            dh_min = dh_min.min(self.warp(r)?.dh);
            q_values.push(self.h3_quantity(r)?);
            h4_values.push(self.h4_quantity(r)?);
        }
        let q_step_min = q_values.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
        let h4_min = h4_values.iter().copied().fold(f64::INFINITY, f64::min);
        Ok(ConditionReport {
            h1,
            h2: ConditionVerdict { pass: dh_min > tol, margin: dh_min, detail: dh_min },
            h3: ConditionVerdict { pass: q_step_min >= -tol, margin: q_step_min, detail: q_step_min },
            h4: ConditionVerdict { pass: h4_min > tol, margin: h4_min, detail: h4_min },
            tol,
            grid: grid.to_vec(),
            q_values,
            h4_values,
        })
    }
}

/// Outcome of one condition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionVerdict {
    pub pass: bool,
    /// H1: `h''(0)`. H2: `min h'`. H3: smallest consecutive step of `q`.
    /// H4: smallest value of the H4 quantity.
    pub margin: f64,
    /// H1: `h'(0)`; otherwise equal to `margin`.
    pub detail: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub h1: ConditionVerdict,
    pub h2: ConditionVerdict,
    pub h3: ConditionVerdict,
    pub h4: ConditionVerdict,
    pub tol: f64,
    pub grid: Vec<f64>,
    pub q_values: Vec<f64>,
    pub h4_values: Vec<f64>,
}

impl ConditionReport {
    pub fn all_pass(&self) -> bool {
        self.h1.pass && self.h2.pass && self.h3.pass && self.h4.pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> Vec<f64> {
        crate::radial::open_grid(0.0, 5.0, 100)
    }

    #[test]
    fn potential_examples() {
        let e = WarpedSpace::euclidean(3).unwrap();
        assert_eq!(e.potential(2.0).unwrap(), 1.0);
        assert_eq!(e.conformal_radial_component(2.0).unwrap(), 2.0);
        let h = WarpedSpace::hyperbolic(3).unwrap();
        assert_eq!(h.potential(1.0).unwrap(), 1f64.cosh());
        assert_eq!(h.conformal_radial_component(1.0).unwrap(), 1f64.sinh());
        assert!(matches!(e.potential(-1.0), Err(Error::OutOfDomain { .. })));
        let s = WarpedSpace::spherical_hemisphere(3).unwrap();
        assert!((s.conformal_radial_component(PI / 4.0).unwrap() - 2f64.sqrt() / 2.0).abs() < 1e-15);
        assert!(s.warp(FRAC_PI_2).is_err());
    }

    #[test]
    fn schwarzschild_profile() {
        let s = WarpedSpace::schwarzschild(3, 1.0).unwrap();
        let w0 = s.warp(0.0).unwrap();
        assert!((w0.h - 2.0).abs() < 1e-14);
        assert_eq!(w0.dh, 0.0);
        for &r in &[0.01, 0.5, 1.0, 3.0, 7.5, 9.99] {
            let w = s.warp(r).unwrap();
            assert!((w.dh - (1.0 - 2.0 / w.h).sqrt()).abs() < 1e-9, "r = {r}");
            assert!((w.d2h - 1.0 / (w.h * w.h)).abs() < 1e-14);
            assert!(s.first_integral_residual(r).unwrap().unwrap().abs() < 1e-10);
        }
        let s4 = WarpedSpace::schwarzschild(4, 1.0).unwrap();
        assert!((s4.warp(0.0).unwrap().h - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn reissner_nordstrom_horizon() {
        let rn = WarpedSpace::reissner_nordstrom(3, 1.0, 0.6).unwrap();
        assert!((rn.warp(0.0).unwrap().h - 1.8).abs() < 1e-14);
        assert!(matches!(
            WarpedSpace::reissner_nordstrom(3, 1.0, 1.0),
            Err(Error::InvalidSpace(_))
        ));
        assert!(WarpedSpace::schwarzschild(3, -1.0).is_err());
        assert!(WarpedSpace::euclidean(2).is_err());
    }

    #[test]
    fn ricci_examples() {
        let e = WarpedSpace::euclidean(4).unwrap();
        assert_eq!(e.ricci_coeffs(1.3).unwrap(), RicciCoefficients { alpha: 0.0, beta: 0.0 });
        assert!(matches!(e.ricci_coeffs(0.0), Err(Error::Singular { .. })));
        for n in 3..6 {
            let h = WarpedSpace::hyperbolic(n).unwrap();
            for &r in &grid() {
                let c = h.ricci_coeffs(r).unwrap();
                assert!((c.alpha - (n as f64 - 1.0)).abs() < 1e-9);
                assert!(c.beta.abs() < 1e-9);
            }
        }
        let s = WarpedSpace::schwarzschild(3, 1.0).unwrap();
        for &r in &[0.2, 1.0, 4.0] {
            let h = s.warp(r).unwrap().h;
            let c = s.ricci_coeffs(r).unwrap();
            assert!((c.beta - 3.0 / h.powi(3)).abs() < 1e-9);
            assert_eq!(s.ric_mixed(r, 0.0, 0.7).unwrap(), 0.0);
            assert!(s.ric_mixed(r, 0.3, 0.7).unwrap() < 0.0);
        }
    }

    #[test]
    fn conditions_catalog() {
        let tol = CONDITION_TOL;
        let e = WarpedSpace::euclidean(3).unwrap().check_conditions(&grid(), tol).unwrap();
        assert!(!e.h1.pass && e.h2.pass && !e.h4.pass);
        assert_eq!(e.h4.margin, 0.0);
        let h = WarpedSpace::hyperbolic(3).unwrap().check_conditions(&grid(), tol).unwrap();
        assert!(!h.h1.pass && !h.h4.pass);
        assert!(h.h4.margin.abs() <= 1e-9);
        for n in [3, 4] {
            let s = WarpedSpace::schwarzschild(n, 1.0).unwrap();
            let rep = s.check_conditions(&s.default_grid(100, 10.0), tol).unwrap();
            assert!(rep.all_pass(), "n = {n}: {rep:?}");
        }
        assert!(WarpedSpace::euclidean(3).unwrap().check_conditions(&[], tol).is_err());
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(2) - 4.0 * PI).abs() < 1e-14);
        assert!((unit_sphere_area(3) - 2.0 * PI * PI).abs() < 1e-14);
    }
}
