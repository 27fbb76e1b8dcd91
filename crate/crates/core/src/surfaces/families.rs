//! Parametric maps and closed-form geometry of the catalog families.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::f64::consts::PI;
// float math for no_std builds; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use super::engine::Immersion;
use crate::quadrature::{gauss_legendre, trapezoid_periodic};

/// `ω(θ_1, .., θ_{n-2}, φ)` on `S^{n-1}`: `ω_{n-1} = cos θ_1`,
/// `ω_{n-2} = sin θ_1 cos θ_2`, ..., `ω_0 = Π sin θ_i · cos φ`,
/// `ω_1 = Π sin θ_i · sin φ`.
pub fn sphere_point(angles: &[f64], out: &mut [f64]) {
    let n = out.len();
    debug_assert_eq!(angles.len(), n - 1);
    let mut prod = 1.0;
    for (i, &theta) in angles[..n - 2].iter().enumerate() {
        out[n - 1 - i] = prod * theta.cos();
        prod *= theta.sin();
    }
    let phi = angles[n - 2];
    out[0] = prod * phi.cos();
    out[1] = prod * phi.sin();
}

/// Area element of the hyperspherical chart: `Π sin^{n-2-i} θ_i`.
pub fn sphere_area_element(angles: &[f64]) -> f64 {
    let polar = angles.len() - 1;
    angles[..polar]
        .iter()
        .enumerate()
        .map(|(i, t)| t.sin().powi((polar - i) as i32))
        .product()
}

/// Tensor grid: per direction nodes and weights; the full grid is the
/// Cartesian product in row-major order (last direction fastest).
#[derive(Debug, Clone)]
pub struct TensorGrid {
    pub axes: Vec<(Vec<f64>, Vec<f64>)>,
    /// Typical node spacing per direction (drives finite-difference steps).
    pub spacing: Vec<f64>,
}

impl TensorGrid {
    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.0.len()).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Parameter point and product weight of flat index `idx`.
    pub fn node(&self, mut idx: usize, out: &mut [f64]) -> f64 {
        let mut w = 1.0;
        for (d, (x, wx)) in self.axes.iter().enumerate().rev() {
            let i = idx % x.len();
            idx /= x.len();
            out[d] = x[i];
            w *= wx[i];
        }
        w
    }

    /// Gauss–Legendre in the `n-2` polar angles and trapezoid (2N nodes) in
    /// the azimuth.
    pub fn sphere(n: usize, res: usize) -> Self {
        let mut axes = Vec::new();
        let mut spacing = Vec::new();
        for _ in 0..n - 2 {
            axes.push(gauss_legendre(res, 0.0, PI));
            spacing.push(PI / res as f64);
        }
        axes.push(trapezoid_periodic(2 * res, 2.0 * PI));
        spacing.push(PI / res as f64);
        Self { axes, spacing }
    }

    /// Both angles periodic with `res` nodes each.
    pub fn torus3(res: usize) -> Self {
        let ax = trapezoid_periodic(res, 2.0 * PI);
        let s = 2.0 * PI / res as f64;
        Self { axes: alloc::vec![ax.clone(), ax], spacing: alloc::vec![s, s] }
    }

    /// Polar angle of the `S²` factor by Gauss–Legendre, two periodic angles.
    pub fn torus4(res: usize) -> Self {
        let ax = trapezoid_periodic(res, 2.0 * PI);
        let s = 2.0 * PI / res as f64;
        Self {
            axes: alloc::vec![gauss_legendre(res, 0.0, PI), ax.clone(), ax],
            spacing: alloc::vec![PI / res as f64, s, s],
        }
    }
}

/// `a e_{n-1} + R ω`; with `a = 0` and `R = r_0` it charts a slice.
#[derive(Debug, Clone)]
pub struct SphereChart {
    pub n: usize,
    pub offset: f64,
    pub radius: f64,
}

impl Immersion for SphereChart {
    fn param_dim(&self) -> usize {
        self.n - 1
    }
    fn point(&self, u: &[f64], out: &mut [f64]) {
        sphere_point(u, out);
        for v in out.iter_mut() {
            *v *= self.radius;
        }
        out[self.n - 1] += self.offset;
    }
}

/// `x = (a_0 ω_0, .., a_{n-1} ω_{n-1})`.
#[derive(Debug, Clone)]
pub struct EllipsoidChart {
    pub semi_axes: Vec<f64>,
}

impl Immersion for EllipsoidChart {
    fn param_dim(&self) -> usize {
        self.semi_axes.len() - 1
    }
    fn point(&self, u: &[f64], out: &mut [f64]) {
        sphere_point(u, out);
        for (v, a) in out.iter_mut().zip(&self.semi_axes) {
            *v *= a;
        }
    }
}

/// Tube of radius `R_2` around the circle of radius `R_1` in the `x_0 x_1`
/// plane: `((R_1 + R_2 cos θ) cos φ, (R_1 + R_2 cos θ) sin φ, R_2 sin θ)`.
#[derive(Debug, Clone, Copy)]
pub struct Torus3Chart {
    pub r1: f64,
    pub r2: f64,
}

impl Immersion for Torus3Chart {
    fn param_dim(&self) -> usize {
        2
    }
    fn point(&self, u: &[f64], out: &mut [f64]) {
        let (theta, phi) = (u[0], u[1]);
        let rho = self.r1 + self.r2 * theta.cos();
        // (θ, φ) is inward for this ordering; the cloud builder reorients
        out[0] = rho * phi.cos();
        out[1] = rho * phi.sin();
        out[2] = self.r2 * theta.sin();
    }
}

/// `S¹ × S²` in `R⁴`: `(ρ cos φ, ρ sin φ, R_2 sin θ cos ψ, R_2 sin θ sin ψ)`
/// with `ρ = R_1 + R_2 cos θ`.
#[derive(Debug, Clone, Copy)]
pub struct Torus4Chart {
    pub r1: f64,
    pub r2: f64,
}

impl Immersion for Torus4Chart {
    fn param_dim(&self) -> usize {
        3
    }
    fn point(&self, u: &[f64], out: &mut [f64]) {
        let (theta, phi, psi) = (u[0], u[1], u[2]);
        let rho = self.r1 + self.r2 * theta.cos();
        out[0] = rho * phi.cos();
        out[1] = rho * phi.sin();
        out[2] = self.r2 * theta.sin() * psi.cos();
        out[3] = self.r2 * theta.sin() * psi.sin();
    }
}

pub type RadialFunction = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// Graph `y = ρ(ω) ω` over the fiber sphere, `r = ρ(ω)` the warped radius.
#[derive(Clone)]
pub struct RadialGraph {
    pub n: usize,
    pub rho: RadialFunction,
}

impl core::fmt::Debug for RadialGraph {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("RadialGraph").field("n", &self.n).finish_non_exhaustive()
    }
}

impl RadialGraph {
    pub fn new(n: usize, rho: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self { n, rho: Arc::new(rho) }
    }
}

impl Immersion for RadialGraph {
    fn param_dim(&self) -> usize {
        self.n - 1
    }
    fn point(&self, u: &[f64], out: &mut [f64]) {
        sphere_point(u, out);
        let rho = (self.rho)(out);
        for v in out.iter_mut() {
            *v *= rho;
        }
    }
}

/// Closed-form torus in `R³` at angle `θ` (radial frame data only).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Torus3Point {
    pub r: f64,
    /// `(1/R_2, cos θ / (R_1 + R_2 cos θ))`.
    pub lambdas: [f64; 2],
    pub dr_nu: f64,
    /// Radial components along `(e_θ, e_φ)`.
    pub dr_e: [f64; 2],
    pub support: f64,
    pub area_element: f64,
}

pub fn torus3_point(r1: f64, r2: f64, theta: f64) -> Torus3Point {
    let (s, c) = theta.sin_cos();
    let rho = r1 + r2 * c;
    let r = (r1 * r1 + 2.0 * r1 * r2 * c + r2 * r2).sqrt();
    Torus3Point {
        r,
        lambdas: [1.0 / r2, c / rho],
        dr_nu: (r1 * c + r2) / r,
        dr_e: [-r1 * s / r, 0.0],
        support: r1 * c + r2,
        area_element: r2 * rho,
    }
}

/// `H_1` of the `R³` torus as a function of the distance to the origin,
/// from the tube curvatures `1/R_2` and `cos θ/(R_1 + R_2 cos θ)`.
pub fn torus3_h1_of_r(r1: f64, r2: f64, r: f64) -> f64 {
    let c = (r * r - r1 * r1 - r2 * r2) / (2.0 * r1 * r2);
    0.5 * (1.0 / r2 + c / (r1 + r2 * c))
}

/// The closed-form `H_1(r)` as printed in the torus counterexample,
/// `(R_1² - r²) / (R_1³ - R_2² R_1 - R_1 r²)`. Reported for comparison only.
pub fn torus3_h1_printed(r1: f64, r2: f64, r: f64) -> f64 {
    (r1 * r1 - r * r) / (r1 * r1 * r1 - r2 * r2 * r1 - r1 * r * r)
}
