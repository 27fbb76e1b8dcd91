//! Spaces and sample clouds from configuration, with node-parallel cloud
//! construction.

use anyhow::{anyhow, bail, Result};
use curvlab_core::ambient::{SpaceKind, WarpedSpace};
use curvlab_core::surfaces::{CurvatureSource, RadialGraph, SurfaceCloud, SurfacePlan, SurfaceSpec};
use rayon::prelude::*;

use crate::config::{SpaceConfig, SurfaceConfig};
use crate::expr::{sphere_bindings, sphere_variables, Expr};

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "CURVLAB_THREADS";

/// Sizes the global pool from `CURVLAB_THREADS` (unset: rayon default).
/// Calling it again is harmless.
pub fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn build_space(cfg: &SpaceConfig) -> Result<WarpedSpace> {
    let need = |v: Option<f64>, what: &str| v.ok_or_else(|| anyhow!("space `{}` needs `{what}`", cfg.kind));
    let kind = match cfg.kind.as_str() {
        "euclidean" => SpaceKind::Euclidean,
        "hyperbolic" => SpaceKind::Hyperbolic,
        "spherical_hemisphere" | "hemisphere" => SpaceKind::SphericalHemisphere,
        "schwarzschild" => SpaceKind::Schwarzschild { mass: need(cfg.mass, "mass")? },
        "reissner_nordstrom" => SpaceKind::ReissnerNordstrom {
            mass: need(cfg.mass, "mass")?,
            charge: need(cfg.charge, "charge")?,
        },
        other => bail!("unknown space `{other}`"),
    };
    Ok(WarpedSpace::new(kind, cfg.n, cfg.extent)?)
}

pub fn build_spec(cfg: &SurfaceConfig, n: usize) -> Result<SurfaceSpec> {
    Ok(match cfg {
        SurfaceConfig::Slice { r0 } => SurfaceSpec::Slice { r0: *r0 },
        SurfaceConfig::Sphere { offset, radius } => SurfaceSpec::Sphere { offset: *offset, radius: *radius },
        SurfaceConfig::Torus3 { r1, r2 } => SurfaceSpec::Torus3 { r1: *r1, r2: *r2 },
        SurfaceConfig::Torus4 { r1, r2 } => SurfaceSpec::Torus4 { r1: *r1, r2: *r2 },
        SurfaceConfig::Ellipsoid { semi_axes } => SurfaceSpec::Ellipsoid { semi_axes: semi_axes.clone() },
        SurfaceConfig::RadialGraph { rho } => {
            let e = Expr::parse(rho)?;
            let names = sphere_variables(n);
            let refs: Vec<&str> = names.iter().map(String::as_str).collect();
            e.check_vars(&refs)?;
            SurfaceSpec::RadialGraph(RadialGraph::new(n, move |omega: &[f64]| e.eval(&sphere_bindings(omega))))
        }
    })
}

/// Builds the cloud, evaluating nodes in parallel; sample order is the
/// grid order regardless of the thread count.
pub fn build_cloud(spec: &SurfaceSpec, space: &WarpedSpace, res: usize, engine: bool) -> Result<SurfaceCloud> {
    let source = if engine { CurvatureSource::Engine } else { CurvatureSource::Auto };
    let plan = SurfacePlan::new(spec, space, res, source)?;
    let samples = (0..plan.len())
        .into_par_iter()
        .map(|i| plan.sample(i))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(plan.finish(samples))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_sequential() {
        let space = WarpedSpace::euclidean(3).unwrap();
        let spec = build_spec(&SurfaceConfig::RadialGraph { rho: "1 + 0.1*cos(theta)".into() }, 3).unwrap();
        let par = build_cloud(&spec, &space, 12, false).unwrap();
        let seq = curvlab_core::surfaces::build_surface(&spec, &space, 12).unwrap();
        assert_eq!(par.samples, seq.samples);
    }

    #[test]
    fn space_parameters_are_required() {
        let cfg = SpaceConfig { kind: "schwarzschild".into(), n: 3, mass: None, charge: None, extent: None };
        assert!(build_space(&cfg).is_err());
        let cfg = SpaceConfig { kind: "flat".into(), n: 3, mass: None, charge: None, extent: None };
        assert!(build_space(&cfg).is_err());
    }
}
