use curvlab_core::ambient::WarpedSpace;
use curvlab_core::radial::{Constant, FnRadial, Polynomial};
use curvlab_core::surfaces::{build_surface, build_surface_with, CurvatureSource, RadialGraph, SurfaceSpec};
use curvlab_core::verify::{brendle_gap, classical_hm_residual, divergence_theorem_check, weighted_hm_residual};
use proptest::prelude::*;

fn slice_residuals(space: &WarpedSpace, r0: f64, res: usize) -> f64 {
    let cloud = build_surface(&SurfaceSpec::Slice { r0 }, space, res).unwrap();
    let phi = Polynomial(vec![0.5, 0.0, 1.0]);
    (1..space.n())
        .map(|k| weighted_hm_residual(&cloud, space, k, &phi).unwrap().relative.abs())
        .fold(0.0, f64::max)
}

#[test]
fn slices_balance_in_model_spaces() {
    for n in [3, 4] {
        let spaces = [
            WarpedSpace::hyperbolic(n).unwrap(),
            WarpedSpace::spherical_hemisphere(n).unwrap(),
            WarpedSpace::reissner_nordstrom(n, 1.0, 0.5).unwrap(),
        ];
        for space in &spaces {
            let r0 = 0.5 * space.sample_max().min(3.0);
            let rel = slice_residuals(space, r0, 10);
            assert!(rel <= 1e-12, "{:?} n={n}: {rel:e}", space.kind());
        }
    }
}

#[test]
fn translated_spheres_are_brendle_equality_cases() {
    let space = WarpedSpace::euclidean(3).unwrap();
    for offset in [0.0, 0.2, 0.45] {
        let cloud = build_surface(&SurfaceSpec::Sphere { offset, radius: 1.0 }, &space, 48).unwrap();
        let gap = brendle_gap(&cloud, &space, 1e-8).unwrap();
        assert!(gap.near_equality, "offset {offset}: gap {:e}", gap.gap);
    }
}

#[test]
fn engine_graph_in_hyperbolic_space() {
    let space = WarpedSpace::hyperbolic(3).unwrap();
    let graph = RadialGraph::new(3, |w: &[f64]| 0.8 + 0.1 * w[2] + 0.05 * w[0] * w[0]);
    let cloud = build_surface(&SurfaceSpec::RadialGraph(graph), &space, 24).unwrap();
    let phi = FnRadial { f: |r: f64| r.cosh(), df: |r: f64| r.sinh() };
    for k in 1..=2 {
        let w = weighted_hm_residual(&cloud, &space, k, &phi).unwrap();
        assert!(w.relative.abs() < 1e-5, "k={k}: {:e}", w.relative);
        let d = divergence_theorem_check(&cloud, &space, k, &phi).unwrap();
        assert!(d.agreement <= 1e-12);
    }
}

#[test]
fn engine_and_closed_form_identities_agree_on_torus() {
    let space = WarpedSpace::euclidean(3).unwrap();
    let spec = SurfaceSpec::Torus3 { r1: 2.0, r2: 0.7 };
    let closed = build_surface(&spec, &space, 48).unwrap();
    let engine = build_surface_with(&spec, &space, 48, CurvatureSource::Engine).unwrap();
    for j in 0..=1 {
        let a = classical_hm_residual(&closed, &space, j).unwrap();
        let b = classical_hm_residual(&engine, &space, j).unwrap();
        assert!((a.lhs - b.lhs).abs() < 1e-6 * a.lhs.abs().max(1.0));
        assert!(b.relative.abs() < 1e-6);
    }
}

#[test]
fn constant_weight_reduces_to_classical_identity() {
    let space = WarpedSpace::euclidean(4).unwrap();
    let cloud = build_surface(&SurfaceSpec::Sphere { offset: 0.3, radius: 1.2 }, &space, 16).unwrap();
    for k in 1..=3 {
        let w = weighted_hm_residual(&cloud, &space, k, &Constant(1.0)).unwrap();
        let c = classical_hm_residual(&cloud, &space, k - 1).unwrap();
        assert!((w.lhs - (c.lhs - c.rhs)).abs() < 1e-12);
        assert_eq!(w.rhs, 0.0);
        assert!(w.relative.abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn schwarzschild_slices_balance(n in 3usize..=4, mass in 0.2f64..2.0, t in 0.1f64..0.9) {
        let space = WarpedSpace::schwarzschild(n, mass).unwrap();
        let r0 = t * space.sample_max().min(4.0);
        prop_assume!(r0 > 0.0);
        prop_assert!(slice_residuals(&space, r0, 8) <= 1e-12);
    }

    #[test]
    fn sphere_identities_hold_for_any_offset(offset in -0.8f64..0.8, radius in 0.5f64..2.0) {
        let space = WarpedSpace::euclidean(3).unwrap();
        let cloud = build_surface(&SurfaceSpec::Sphere { offset, radius }, &space, 48).unwrap();
        for j in 0..=1 {
            prop_assert!(classical_hm_residual(&cloud, &space, j).unwrap().relative.abs() <= 1e-8);
        }
    }
}
