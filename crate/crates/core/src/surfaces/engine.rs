//! Metric-aware immersion engine.
//!
//! Points of the ambient space are written in model coordinates
//! `y = r ω ∈ R^n` with `ω` on the unit fiber sphere. Ambient tangent
//! vectors are expressed in the orthonormal frame `(∂_r, h⁻¹ ∂_ω)`, which
//! identifies `(T M, ḡ)` isometrically with Euclidean `R^n`: a vector with
//! radial part `ρ` and fiber part `w ⟂ ω` maps to `ρ ω + h w`.
//!
//! In that frame the Levi-Civita acceleration of a two-parameter family is
//!
//! ```text
//! ∇̄_a ∂_b F = [r_ab - h h' ⟨ω_a, ω_b⟩] ω + h P(ω_ab) + h' (r_b ω_a + r_a ω_b)
//! ```
//!
//! with `P` the projection onto `ω^⊥`. The second fundamental form is
//! `A_ab = ⟨∇̄_a ∂_b F, -ν⟩`, so round spheres have positive curvature with
//! respect to the outward normal.

use alloc::vec;
use alloc::vec::Vec;
// float math for no_std builds; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::ambient::WarpedSpace;
use crate::linalg::{det, dot, generalized_eigen, norm};
use crate::{Error, Result};

/// A parametric map from `R^{n-1}` into model coordinates of `R^n`.
pub trait Immersion: Send + Sync {
    fn param_dim(&self) -> usize;
    fn ambient_dim(&self) -> usize {
        self.param_dim() + 1
    }
    fn point(&self, u: &[f64], out: &mut [f64]);
}

/// Pointwise output of the engine.
#[derive(Debug, Clone, PartialEq)]
pub struct PointGeometry {
    pub position: Vec<f64>,
    pub r: f64,
    pub h: f64,
    /// `sqrt(det g)` in the chart.
    pub area_element: f64,
    /// Principal curvatures, ascending.
    pub lambdas: Vec<f64>,
    /// Unit normal in frame coordinates.
    pub normal: Vec<f64>,
    pub dr_nu: f64,
    pub dr_e: Vec<f64>,
}

/// Derivatives of the map at a node by Richardson-extrapolated centered
/// differences (`(4 D(s/2) - D(s)) / 3`).
struct Jet {
    y: Vec<f64>,
    dy: Vec<Vec<f64>>,
    ddy: Vec<Vec<Vec<f64>>>,
}

fn jet(map: &dyn Immersion, u: &[f64], steps: &[f64]) -> Jet {
    let m = map.param_dim();
    let n = map.ambient_dim();
    let mut y = vec![0.0; n];
    map.point(u, &mut y);
    let mut dy = vec![vec![0.0; n]; m];
    let mut ddy = vec![vec![vec![0.0; n]; m]; m];
    let mut scratch = u.to_vec();
    let mut p = vec![0.0; n];
    let mut eval = |shift: &[(usize, f64)], out: &mut Vec<f64>| {
        scratch.copy_from_slice(u);
        for &(a, d) in shift {
            scratch[a] += d;
        }
        map.point(&scratch, &mut p);
        out.copy_from_slice(&p);
    };
    let mut plus = vec![0.0; n];
    let mut minus = vec![0.0; n];
    let mut pp = vec![0.0; n];
    let mut pm = vec![0.0; n];
    let mut mp = vec![0.0; n];
    let mut mm = vec![0.0; n];
    for a in 0..m {
        let mut first = [vec![0.0; n], vec![0.0; n]];
        let mut second = [vec![0.0; n], vec![0.0; n]];
        for (level, s) in [steps[a], 0.5 * steps[a]].into_iter().enumerate() {
            eval(&[(a, s)], &mut plus);
            eval(&[(a, -s)], &mut minus);
            for i in 0..n {
                first[level][i] = (plus[i] - minus[i]) / (2.0 * s);
                second[level][i] = (plus[i] - 2.0 * y[i] + minus[i]) / (s * s);
            }
        }
        for i in 0..n {
            dy[a][i] = (4.0 * first[1][i] - first[0][i]) / 3.0;
            ddy[a][a][i] = (4.0 * second[1][i] - second[0][i]) / 3.0;
        }
    }
    for a in 0..m {
        for b in a + 1..m {
            let mut mixed = [vec![0.0; n], vec![0.0; n]];
            for (level, scale) in [1.0, 0.5].into_iter().enumerate() {
                let (sa, sb) = (scale * steps[a], scale * steps[b]);
                eval(&[(a, sa), (b, sb)], &mut pp);
                eval(&[(a, sa), (b, -sb)], &mut pm);
                eval(&[(a, -sa), (b, sb)], &mut mp);
                eval(&[(a, -sa), (b, -sb)], &mut mm);
                for i in 0..n {
                    mixed[level][i] = (pp[i] - pm[i] - mp[i] + mm[i]) / (4.0 * sa * sb);
                }
            }
            for i in 0..n {
                let v = (4.0 * mixed[1][i] - mixed[0][i]) / 3.0;
                ddy[a][b][i] = v;
                ddy[b][a][i] = v;
            }
        }
    }
    Jet { y, dy, ddy }
}

/// Unit normal via the generalized cross product `ν_i = det[E_1..E_m, e_i]`.
fn cross_normal(tangents: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut mat = vec![0.0; n * n];
    for (row, t) in tangents.iter().enumerate() {
        mat[row * n..row * n + n].copy_from_slice(t);
    }
    let mut nu = vec![0.0; n];
    for (i, slot) in nu.iter_mut().enumerate() {
        for c in 0..n {
            mat[(n - 1) * n + c] = if c == i { 1.0 } else { 0.0 };
        }
        *slot = det(&mat, n);
    }
    let len = norm(&nu);
    nu.iter().map(|v| v / len).collect()
}

/// Geometry at parameter `u`. `steps` are the finite-difference steps per
/// parameter direction; `orientation` (±1) multiplies the cross-product
/// normal.
pub fn immersion_geometry(
    map: &dyn Immersion,
    u: &[f64],
    steps: &[f64],
    space: &WarpedSpace,
    orientation: f64,
    index: usize,
) -> Result<PointGeometry> {
    let m = map.param_dim();
    let n = map.ambient_dim();
    if n != space.n() || u.len() != m || steps.len() != m {
        return Err(Error::Incompatible("parameter/ambient dimensions disagree".into()));
    }
    let Jet { y, dy, ddy } = jet(map, u, steps);
    let r = norm(&y);
    if !(r > 0.0) {
        return Err(Error::DegenerateNode { index });
    }
    let w = space.warp(r)?;
    let (h, dh) = (w.h, w.dh);
    let omega: Vec<f64> = y.iter().map(|v| v / r).collect();
    let r_a: Vec<f64> = dy.iter().map(|d| dot(&omega, d)).collect();
    let omega_a: Vec<Vec<f64>> = (0..m)
        .map(|a| (0..n).map(|i| (dy[a][i] - r_a[a] * omega[i]) / r).collect())
        .collect();
    let tangents: Vec<Vec<f64>> = (0..m)
        .map(|a| (0..n).map(|i| r_a[a] * omega[i] + h * omega_a[a][i]).collect())
        .collect();
    let mut g = vec![0.0; m * m];
    for a in 0..m {
        for b in 0..m {
            g[a * m + b] = dot(&tangents[a], &tangents[b]);
        }
    }
    let det_g = det(&g, m);
    if !(det_g > 0.0) {
        return Err(Error::DegenerateNode { index });
    }
    let normal: Vec<f64> = cross_normal(&tangents, n).into_iter().map(|v| v * orientation).collect();
    let mut second = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let r_ab = (dot(&dy[a], &dy[b]) - r_a[a] * r_a[b]) / r + dot(&omega, &ddy[a][b]);
            let omega_ab: Vec<f64> = (0..n)
                .map(|i| {
                    (ddy[a][b][i] - r_ab * omega[i] - r_a[a] * omega_a[b][i] - r_a[b] * omega_a[a][i]) / r
                })
                .collect();
            let radial_ab = dot(&omega_ab, &omega);
            let oo = dot(&omega_a[a], &omega_a[b]);
            let z: Vec<f64> = (0..n)
                .map(|i| {
                    (r_ab - h * dh * oo) * omega[i]
                        + h * (omega_ab[i] - radial_ab * omega[i])
                        + dh * (r_a[b] * omega_a[a][i] + r_a[a] * omega_a[b][i])
                })
                .collect();
            let v = -dot(&z, &normal);
            second[a * m + b] = v;
            second[b * m + a] = v;
        }
    }
    let (lambdas, vecs) = generalized_eigen(&second, &g, m).ok_or(Error::DegenerateNode { index })?;
    let dr_e = (0..m)
        .map(|j| {
            let e: Vec<f64> = (0..n)
                .map(|i| (0..m).map(|a| vecs[a * m + j] * tangents[a][i]).sum())
                .collect();
            dot(&omega, &e)
        })
        .collect();
    Ok(PointGeometry {
        position: y,
        r,
        h,
        area_element: det_g.sqrt(),
        lambdas,
        dr_nu: dot(&omega, &normal),
        normal,
        dr_e,
    })
}
