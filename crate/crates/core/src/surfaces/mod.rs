//! Hypersurface sources: closed-form catalog families and the generic
//! immersion engine, both producing quadrature-ready [`SurfaceCloud`]s.

pub mod engine;
pub mod families;
pub mod profiles;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
// float math for no_std builds; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::ambient::WarpedSpace;
use crate::quadrature::pairwise_sum;
use crate::symfun::CurvatureVector;
use crate::{Error, Result};

pub use engine::{immersion_geometry, Immersion, PointGeometry};
pub use families::{
    sphere_area_element, sphere_point, RadialFunction, torus3_h1_of_r, torus3_h1_printed, torus3_point, EllipsoidChart,
    RadialGraph, SphereChart, TensorGrid, Torus3Chart, Torus4Chart,
};
pub use profiles::{radial_profile, torus_profiles, RadialProfile, TorusProfiles};

/// Smallest accepted resolution per parametric direction.
pub const MIN_RESOLUTION: usize = 8;

/// Surface family and parameters.
#[derive(Debug, Clone)]
pub enum SurfaceSpec {
    /// Level set `{r = r0}`; valid in every catalog space.
    Slice { r0: f64 },
    /// Round sphere of radius `radius` centred at `offset · e_{n-1}`
    /// (Euclidean only).
    Sphere { offset: f64, radius: f64 },
    /// Circular torus in `R³`, tube radius `r2` around a circle of radius `r1`.
    Torus3 { r1: f64, r2: f64 },
    /// `S¹ × S²` tube in `R⁴`.
    Torus4 { r1: f64, r2: f64 },
    /// Axis-aligned ellipsoid in `R^n` (one semi-axis per dimension).
    Ellipsoid { semi_axes: Vec<f64> },
    /// `r = ρ(ω)` over the fiber sphere, any catalog space.
    RadialGraph(RadialGraph),
}

impl SurfaceSpec {
    pub fn label(&self) -> String {
        match self {
            SurfaceSpec::Slice { r0 } => format!("slice(r0={r0})"),
            SurfaceSpec::Sphere { offset, radius } => format!("sphere(offset={offset}, R={radius})"),
            SurfaceSpec::Torus3 { r1, r2 } => format!("torus3(R1={r1}, R2={r2})"),
            SurfaceSpec::Torus4 { r1, r2 } => format!("torus4(R1={r1}, R2={r2})"),
            SurfaceSpec::Ellipsoid { semi_axes } => format!("ellipsoid({semi_axes:?})"),
            SurfaceSpec::RadialGraph(_) => "radial_graph".into(),
        }
    }

    /// Whether curvature is available in closed form.
    pub fn has_closed_form(&self) -> bool {
        matches!(self, SurfaceSpec::Slice { .. } | SurfaceSpec::Sphere { .. } | SurfaceSpec::Torus3 { .. })
    }

    /// Whether the family is embedded by construction (required by the
    /// Heintze–Karcher gap).
    pub fn is_embedded(&self) -> bool {
        match self {
            SurfaceSpec::Torus3 { r1, r2 } | SurfaceSpec::Torus4 { r1, r2 } => r2 < r1,
            SurfaceSpec::RadialGraph(_) => false,
            _ => true,
        }
    }

    /// Thinness used by the torus counterexample: `R_2 < R_1/2` in `R³`,
    /// `R_2 < R_1/3` in `R⁴`. Reported, never enforced.
    pub fn thin_flag(&self) -> Option<bool> {
        match *self {
            SurfaceSpec::Torus3 { r1, r2 } => Some(r2 < r1 / 2.0),
            SurfaceSpec::Torus4 { r1, r2 } => Some(r2 < r1 / 3.0),
            _ => None,
        }
    }

    fn validate(&self, space: &WarpedSpace) -> Result<()> {
        let n = space.n();
        let euclid = |what: &str, dim: Option<usize>| -> Result<()> {
            if !space.is_euclidean() {
                return Err(Error::Incompatible(format!("{what} requires a Euclidean ambient")));
            }
            if let Some(d) = dim {
                if d != n {
                    return Err(Error::Incompatible(format!("{what} lives in R^{d}, ambient is R^{n}")));
                }
            }
            Ok(())
        };
        match self {
            SurfaceSpec::Slice { r0 } => {
                if !(*r0 > 0.0 && *r0 <= space.sample_max()) {
                    return Err(Error::OutOfDomain { r: *r0, r_max: space.sample_max() });
                }
                Ok(())
            }
            SurfaceSpec::Sphere { offset, radius } => {
                euclid("sphere", None)?;
                if !(*radius > 0.0) || !offset.is_finite() {
                    return Err(Error::Incompatible("sphere needs a positive radius and finite offset".into()));
                }
                Ok(())
            }
            SurfaceSpec::Torus3 { r1, r2 } | SurfaceSpec::Torus4 { r1, r2 } => {
                let dim = if matches!(self, SurfaceSpec::Torus3 { .. }) { 3 } else { 4 };
                euclid("torus", Some(dim))?;
                if !(*r2 > 0.0 && r2 < r1) {
                    return Err(Error::Incompatible(format!("torus needs 0 < R2 < R1, got {r1}, {r2}")));
                }
                Ok(())
            }
            SurfaceSpec::Ellipsoid { semi_axes } => {
                euclid("ellipsoid", Some(semi_axes.len()))?;
                if semi_axes.iter().any(|a| !(*a > 0.0)) {
                    return Err(Error::Incompatible("semi-axes must be positive".into()));
                }
                Ok(())
            }
            SurfaceSpec::RadialGraph(g) => {
                if g.n != n {
                    return Err(Error::Incompatible(format!("radial graph over S^{} in dimension {n}", g.n - 1)));
                }
                Ok(())
            }
        }
    }
}

/// How principal curvatures are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurvatureSource {
    /// Closed form when the family has one, engine otherwise.
    Auto,
    /// Always the immersion engine.
    Engine,
}

/// One quadrature node on a hypersurface.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSample {
    /// Model coordinates `r ω` (the actual position in Euclidean space).
    pub position: Vec<f64>,
    pub r: f64,
    pub h: f64,
    /// Quadrature weight times area element.
    pub weight: f64,
    pub lambdas: CurvatureVector,
    /// `⟨∂_r, ν⟩`.
    pub dr_nu: f64,
    /// `⟨∂_r, e_j⟩` in the principal frame.
    pub dr_e: Vec<f64>,
    /// `p = ⟨X, ν⟩ = h dr_nu`.
    pub support: f64,
    /// `ξ^j = h dr_e[j]`, the tangential part of `X`.
    pub xi: Vec<f64>,
}

impl SurfaceSample {
    fn assemble(position: Vec<f64>, r: f64, h: f64, weight: f64, lambdas: Vec<f64>, dr_nu: f64, dr_e: Vec<f64>) -> Result<Self> {
        let xi = dr_e.iter().map(|d| h * d).collect();
        Ok(Self {
            position,
            r,
            h,
            weight,
            lambdas: CurvatureVector::new(lambdas)?,
            dr_nu,
            dr_e,
            support: h * dr_nu,
            xi,
        })
    }

    /// `dr_nu² + Σ dr_e² - 1`.
    pub fn frame_defect(&self) -> f64 {
        self.dr_nu * self.dr_nu + self.dr_e.iter().map(|d| d * d).sum::<f64>() - 1.0
    }
}

/// Quadrature nodes in parameter space and their weights.
#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    pub nodes: Vec<Vec<f64>>,
    /// Includes the analytic area element when `area_element_included`.
    pub weights: Vec<f64>,
    pub area_element_included: bool,
}

fn tensor_grid(spec: &SurfaceSpec, n: usize, res: usize) -> TensorGrid {
    match spec {
        SurfaceSpec::Torus3 { .. } => TensorGrid::torus3(res),
        SurfaceSpec::Torus4 { .. } => TensorGrid::torus4(res),
        _ => TensorGrid::sphere(n, res),
    }
}

/// Analytic area element for closed-form families.
fn analytic_area_element(spec: &SurfaceSpec, space: &WarpedSpace, u: &[f64]) -> Result<Option<f64>> {
    let m = space.n() as i32 - 1;
    Ok(match *spec {
        SurfaceSpec::Slice { r0 } => Some(space.warp(r0)?.h.powi(m) * sphere_area_element(u)),
        SurfaceSpec::Sphere { radius, .. } => Some(radius.powi(m) * sphere_area_element(u)),
        SurfaceSpec::Torus3 { r1, r2 } => Some(torus3_point(r1, r2, u[0]).area_element),
        SurfaceSpec::Torus4 { r1, r2 } => Some(r2 * r2 * u[0].sin() * (r1 + r2 * u[0].cos())),
        _ => None,
    })
}

/// Tensor-product nodes: trapezoid in periodic directions, Gauss–Legendre in
/// polar angles. `res` nodes per polar direction (2·`res` for the sphere
/// azimuth, `res` for torus angles).
pub fn quadrature_grid(spec: &SurfaceSpec, space: &WarpedSpace, res: usize) -> Result<QuadratureGrid> {
    if res < MIN_RESOLUTION {
        return Err(Error::Precondition(format!("resolution {res} below {MIN_RESOLUTION}")));
    }
    spec.validate(space)?;
    let grid = tensor_grid(spec, space.n(), res);
    let mut nodes = Vec::with_capacity(grid.len());
    let mut weights = Vec::with_capacity(grid.len());
    let mut included = true;
    let mut u = vec![0.0; grid.axes.len()];
    for idx in 0..grid.len() {
        let w = grid.node(idx, &mut u);
        match analytic_area_element(spec, space, &u)? {
            Some(a) => weights.push(w * a),
            None => {
                included = false;
                weights.push(w);
            }
        }
        nodes.push(u.clone());
    }
    Ok(QuadratureGrid { nodes, weights, area_element_included: included })
}

/// A sample cloud: immutable once built.
#[derive(Debug, Clone)]
pub struct SurfaceCloud {
    pub label: String,
    pub n: usize,
    pub resolution: usize,
    pub engine: bool,
    pub embedded: bool,
    pub samples: Vec<SurfaceSample>,
}

impl SurfaceCloud {
    pub fn m(&self) -> usize {
        self.n - 1
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `Σ w f(sample)` with pairwise reduction.
    pub fn integrate(&self, f: impl Fn(&SurfaceSample) -> f64) -> f64 {
        let terms: Vec<f64> = self.samples.iter().map(|s| s.weight * f(s)).collect();
        pairwise_sum(&terms)
    }

    /// `Σ w_i v_i` for per-sample values in cloud order.
    pub fn weighted_sum(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.samples.len());
        let terms: Vec<f64> = self.samples.iter().zip(values).map(|(s, v)| s.weight * v).collect();
        pairwise_sum(&terms)
    }

    pub fn area(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    pub fn r_range(&self) -> (f64, f64) {
        self.samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| (lo.min(s.r), hi.max(s.r)))
    }

    pub fn max_frame_defect(&self) -> f64 {
        self.samples.iter().map(|s| s.frame_defect().abs()).fold(0.0, f64::max)
    }

    /// Every sample has principal-curvature spread below `tol`.
    pub fn is_umbilic(&self, tol: f64) -> bool {
        self.samples.iter().all(|s| s.lambdas.spread() < tol)
    }

    /// `min dr_nu`: nonnegative for weakly, positive for strictly
    /// star-shaped clouds.
    pub fn min_dr_nu(&self) -> f64 {
        self.samples.iter().map(|s| s.dr_nu).fold(f64::INFINITY, f64::min)
    }

    pub fn star_shaped(&self) -> StarShape {
        let min = self.min_dr_nu();
        StarShape { weak: min >= 0.0, strict: min > 0.0, min_dr_nu: min }
    }
}

/// Weak (`⟨X,ν⟩ >= 0`) and strict (`⟨∂_r,ν⟩ > 0`) star-shapedness, kept apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarShape {
    pub weak: bool,
    pub strict: bool,
    pub min_dr_nu: f64,
}

/// Everything needed to evaluate one sample, so drivers can parallelize
/// over nodes.
pub struct SurfacePlan<'a> {
    spec: SurfaceSpec,
    space: &'a WarpedSpace,
    grid: TensorGrid,
    map: Box<dyn Immersion + 'a>,
    steps: Vec<f64>,
    orientation: f64,
    engine: bool,
    resolution: usize,
}

/// Finite-difference step from the node spacing: `spacing / 8`, clamped to
/// `[2e-3, 1e-2]` to balance truncation against roundoff.
fn fd_step(spacing: f64) -> f64 {
    (spacing / 8.0).clamp(2e-3, 1e-2)
}

impl<'a> SurfacePlan<'a> {
    pub fn new(spec: &SurfaceSpec, space: &'a WarpedSpace, res: usize, source: CurvatureSource) -> Result<Self> {
        if res < MIN_RESOLUTION {
            return Err(Error::Precondition(format!("resolution {res} below {MIN_RESOLUTION}")));
        }
        spec.validate(space)?;
        let n = space.n();
        let grid = tensor_grid(spec, n, res);
        let map: Box<dyn Immersion> = match spec {
            SurfaceSpec::Slice { r0 } => Box::new(SphereChart { n, offset: 0.0, radius: *r0 }),
            SurfaceSpec::Sphere { offset, radius } => Box::new(SphereChart { n, offset: *offset, radius: *radius }),
            SurfaceSpec::Torus3 { r1, r2 } => Box::new(Torus3Chart { r1: *r1, r2: *r2 }),
            SurfaceSpec::Torus4 { r1, r2 } => Box::new(Torus4Chart { r1: *r1, r2: *r2 }),
            SurfaceSpec::Ellipsoid { semi_axes } => Box::new(EllipsoidChart { semi_axes: semi_axes.clone() }),
            SurfaceSpec::RadialGraph(g) => Box::new(g.clone()),
        };
        let steps = grid.spacing.iter().map(|&s| fd_step(s)).collect();
        let engine = source == CurvatureSource::Engine || !spec.has_closed_form();
        let mut plan = Self {
            spec: spec.clone(),
            space,
            grid,
            map,
            steps,
            orientation: 1.0,
            engine,
            resolution: res,
        };
        if engine {
            plan.orient()?;
        }
        Ok(plan)
    }

    /// The farthest point from the origin has outward normal `∂_r`; fix the
    /// global sign there.
    fn orient(&mut self) -> Result<()> {
        let n = self.space.n();
        let mut u = vec![0.0; n - 1];
        let mut y = vec![0.0; n];
        let mut best = (0, f64::NEG_INFINITY);
        for idx in 0..self.grid.len() {
            self.grid.node(idx, &mut u);
            self.map.point(&u, &mut y);
            let r2: f64 = y.iter().map(|v| v * v).sum();
            if r2 > best.1 {
                best = (idx, r2);
            }
        }
        self.grid.node(best.0, &mut u);
        let g = immersion_geometry(self.map.as_ref(), &u, &self.steps, self.space, 1.0, best.0)?;
        if g.dr_nu < 0.0 {
            self.orientation = -1.0;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn sample(&self, idx: usize) -> Result<SurfaceSample> {
        let n = self.space.n();
        let mut u = vec![0.0; n - 1];
        let w = self.grid.node(idx, &mut u);
        if self.engine {
            let g = immersion_geometry(self.map.as_ref(), &u, &self.steps, self.space, self.orientation, idx)?;
            return SurfaceSample::assemble(g.position, g.r, g.h, w * g.area_element, g.lambdas, g.dr_nu, g.dr_e);
        }
        let area = analytic_area_element(&self.spec, self.space, &u)?.expect("closed-form family");
        match self.spec {
            SurfaceSpec::Slice { r0 } => {
                let wv = self.space.warp(r0)?;
                let mut pos = vec![0.0; n];
                sphere_point(&u, &mut pos);
                pos.iter_mut().for_each(|v| *v *= r0);
                SurfaceSample::assemble(pos, r0, wv.h, w * area, vec![wv.dh / wv.h; n - 1], 1.0, vec![0.0; n - 1])
            }
            SurfaceSpec::Sphere { offset, radius } => {
                let mut omega = vec![0.0; n];
                sphere_point(&u, &mut omega);
                let pos: Vec<f64> = omega
                    .iter()
                    .enumerate()
                    .map(|(i, o)| radius * o + if i == n - 1 { offset } else { 0.0 })
                    .collect();
                let r = crate::linalg::norm(&pos);
                if !(r > 0.0) {
                    return Err(Error::DegenerateNode { index: idx });
                }
                let dr_nu = crate::linalg::dot(&pos, &omega) / r;
                // umbilic: pick e_0 along the tangential part of ∂_r
                let tangential = (1.0 - dr_nu * dr_nu).max(0.0).sqrt();
                let mut dr_e = vec![0.0; n - 1];
                dr_e[0] = tangential;
                SurfaceSample::assemble(pos, r, r, w * area, vec![1.0 / radius; n - 1], dr_nu, dr_e)
            }
            SurfaceSpec::Torus3 { r1, r2 } => {
                let t = torus3_point(r1, r2, u[0]);
                let mut pos = vec![0.0; 3];
                self.map.point(&u, &mut pos);
                SurfaceSample::assemble(pos, t.r, t.r, w * area, t.lambdas.to_vec(), t.dr_nu, t.dr_e.to_vec())
            }
            _ => unreachable!("engine-only family"),
        }
    }

    pub fn finish(&self, samples: Vec<SurfaceSample>) -> SurfaceCloud {
        SurfaceCloud {
            label: self.spec.label(),
            n: self.space.n(),
            resolution: self.resolution,
            engine: self.engine,
            embedded: self.spec.is_embedded(),
            samples,
        }
    }
}

/// Builds the full sample cloud sequentially.
pub fn build_surface(spec: &SurfaceSpec, space: &WarpedSpace, res: usize) -> Result<SurfaceCloud> {
    build_surface_with(spec, space, res, CurvatureSource::Auto)
}

pub fn build_surface_with(
    spec: &SurfaceSpec,
    space: &WarpedSpace,
    res: usize,
    source: CurvatureSource,
) -> Result<SurfaceCloud> {
    let plan = SurfacePlan::new(spec, space, res, source)?;
    let samples = (0..plan.len()).map(|i| plan.sample(i)).collect::<Result<Vec<_>>>()?;
    Ok(plan.finish(samples))
}

/// Result of the elliptic-point search.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticWitness {
    pub found: bool,
    pub index: usize,
    pub sample: SurfaceSample,
}

/// Takes the sample farthest from the origin and reports whether all its
/// principal curvatures are positive.
pub fn elliptic_point_check(cloud: &SurfaceCloud) -> Option<EllipticWitness> {
    let (index, sample) = cloud
        .samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.r.total_cmp(&b.1.r))?;
    Some(EllipticWitness {
        found: sample.lambdas.values().iter().all(|&l| l > 0.0),
        index,
        sample: sample.clone(),
    })
}
