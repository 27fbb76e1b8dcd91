//! One-dimensional rules, deterministic reductions and convergence orders.

use alloc::vec::Vec;
use core::f64::consts::PI;
// float math for no_std builds; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

/// Gauss–Legendre nodes and weights on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = alloc::vec![0.0; n];
    let mut weights = alloc::vec![0.0; n];
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = mid - half * x;
        nodes[n - 1 - i] = mid + half * x;
        weights[i] = half * w;
        weights[n - 1 - i] = half * w;
    }
    (nodes, weights)
}

/// `P_n(x)` and `P_n'(x)`.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Uniform periodic trapezoid nodes `i·T/n` with equal weights `T/n`.
pub fn trapezoid_periodic(n: usize, period: f64) -> (Vec<f64>, Vec<f64>) {
    let h = period / n as f64;
    ((0..n).map(|i| i as f64 * h).collect(), alloc::vec![h; n])
}

/// Pairwise (tree) summation; the association order depends only on the
/// length, so results are bit-stable across runs.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 32;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let (l, r) = values.split_at(values.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// Residuals below this (relative) level are treated as converged to
/// roundoff; their ratio carries no information about the order.
pub const ROUNDOFF_FLOOR: f64 = 1e-13;

/// Empirical order of convergence between a grid and its refinement by a
/// factor of two.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConvergenceOrder {
    /// `log2(coarse / fine)`.
    Measured(f64),
    /// The fine residual already sits at the roundoff floor.
    Saturated,
}

impl ConvergenceOrder {
    /// Both residuals are relative.
    pub fn estimate(coarse: f64, fine: f64) -> Self {
        let (coarse, fine) = (coarse.abs(), fine.abs());
        if fine <= ROUNDOFF_FLOOR {
            ConvergenceOrder::Saturated
        } else {
            ConvergenceOrder::Measured((coarse / fine).log2())
        }
    }

    pub fn at_least(&self, order: f64) -> bool {
        match *self {
            ConvergenceOrder::Saturated => true,
            ConvergenceOrder::Measured(p) => p >= order,
        }
    }

    /// `None` when saturated.
    pub fn value(&self) -> Option<f64> {
        match *self {
            ConvergenceOrder::Saturated => None,
            ConvergenceOrder::Measured(p) => Some(p),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exactness() {
        let (x, w) = gauss_legendre(5, -1.0, 1.0);
        // exact through degree 9
        let integral: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((integral - 2.0 / 9.0).abs() < 1e-14);
        let (x, w) = gauss_legendre(32, 0.0, PI);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.sin()).sum();
        assert!((s - 2.0).abs() < 1e-14);
        assert!(x.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn trapezoid_is_spectral_for_periodic() {
        let (x, w) = trapezoid_periodic(16, 2.0 * PI);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.cos().exp()).sum();
        // 2π I_0(1)
        assert!((s - 2.0 * PI * 1.2660658777520082).abs() < 1e-13);
    }

    #[test]
    fn pairwise_is_order_stable() {
        let v: Vec<f64> = (0..1000).map(|i| 1.0 / (i as f64 + 1.0)).collect();
        assert_eq!(pairwise_sum(&v).to_bits(), pairwise_sum(&v).to_bits());
        assert!((pairwise_sum(&v) - v.iter().sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn order_estimates() {
        assert_eq!(ConvergenceOrder::estimate(4e-6, 1e-6), ConvergenceOrder::Measured(2.0));
        assert!(ConvergenceOrder::estimate(1e-15, 2e-15).at_least(2.0));
        assert!(!ConvergenceOrder::estimate(2e-6, 1e-6).at_least(2.0));
    }
}
