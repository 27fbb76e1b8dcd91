//! Radial coefficient functions `φ(r)`, `b_j(r)`, `c_j(r)`, `a_i(r)`, `η(r)`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

/// A smooth function of the radial coordinate with derivative access.
pub trait RadialFn: Send + Sync {
    fn value(&self, r: f64) -> f64;
    fn derivative(&self, r: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constant(pub f64);

impl RadialFn for Constant {
    fn value(&self, _r: f64) -> f64 {
        self.0
    }
    fn derivative(&self, _r: f64) -> f64 {
        0.0
    }
}

/// `Σ coeffs[i] · r^i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial(pub Vec<f64>);

impl RadialFn for Polynomial {
    fn value(&self, r: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * r + c)
    }
    fn derivative(&self, r: f64) -> f64 {
        self.0
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (i, c)| acc * r + i as f64 * c)
    }
}

/// A radial function given by a pair of closures.
pub struct FnRadial<F, D> {
    pub f: F,
    pub df: D,
}

impl<F, D> RadialFn for FnRadial<F, D>
where
    F: Fn(f64) -> f64 + Send + Sync,
    D: Fn(f64) -> f64 + Send + Sync,
{
    fn value(&self, r: f64) -> f64 {
        (self.f)(r)
    }
    fn derivative(&self, r: f64) -> f64 {
        (self.df)(r)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    Increasing,
    Decreasing,
    Unspecified,
}

/// A radial function together with its declared monotonicity.
#[derive(Clone)]
pub struct Weight {
    pub func: Arc<dyn RadialFn>,
    pub declared: Monotonicity,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Weight").field("declared", &self.declared).finish_non_exhaustive()
    }
}

impl Weight {
    pub fn new(func: impl RadialFn + 'static, declared: Monotonicity) -> Self {
        Self { func: Arc::new(func), declared }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(Constant(c), Monotonicity::Unspecified)
    }

    pub fn value(&self, r: f64) -> f64 {
        self.func.value(r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.func.derivative(r)
    }

    /// Samples the declared monotonicity on a sorted grid. Constants satisfy
    /// both weak directions.
    pub fn check_monotonicity(&self, grid: &[f64]) -> MonotonicityCheck {
        let diffs = grid.windows(2).map(|w| self.value(w[1]) - self.value(w[0]));
        let margin = match self.declared {
            Monotonicity::Increasing => diffs.fold(f64::INFINITY, f64::min),
            Monotonicity::Decreasing => diffs.map(|d| -d).fold(f64::INFINITY, f64::min),
            Monotonicity::Unspecified => f64::INFINITY,
        };
        MonotonicityCheck { declared: self.declared, margin, holds: margin >= 0.0 }
    }

    /// Largest gap between the analytic derivative and a centered
    /// difference with the given step.
    pub fn derivative_mismatch(&self, grid: &[f64], step: f64) -> f64 {
        grid.iter()
            .map(|&r| {
                let fd = (self.value(r + step) - self.value(r - step)) / (2.0 * step);
                (fd - self.derivative(r)).abs()
            })
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityCheck {
    pub declared: Monotonicity,
    /// Smallest consecutive difference in the declared direction.
    pub margin: f64,
    pub holds: bool,
}

/// Coefficient families of the radial rigidity hypotheses.
///
/// Indices are the curvature orders the coefficients multiply: `b[(j, w)]`
/// multiplies `H_j`, `c[(j, w)]` multiplies `H_1 H_{j-1}`, `a[(i, w)]`
/// multiplies `H_i` on the left-hand side of a ratio condition.
#[derive(Debug, Clone, Default)]
pub struct WeightFamily {
    pub b: Vec<(usize, Weight)>,
    pub c: Vec<(usize, Weight)>,
    pub a: Vec<(usize, Weight)>,
    pub eta: Option<Weight>,
}

impl WeightFamily {
    pub fn with_b(mut self, j: usize, w: Weight) -> Self {
        self.b.push((j, w));
        self
    }
    pub fn with_c(mut self, j: usize, w: Weight) -> Self {
        self.c.push((j, w));
        self
    }
    pub fn with_a(mut self, i: usize, w: Weight) -> Self {
        self.a.push((i, w));
        self
    }
    pub fn with_eta(mut self, w: Weight) -> Self {
        self.eta = Some(w);
        self
    }

    /// Monotonicity checks for every member, in declaration order.
    pub fn check_monotonicity(&self, grid: &[f64]) -> Vec<MonotonicityCheck> {
        self.b
            .iter()
            .chain(&self.c)
            .chain(&self.a)
            .map(|(_, w)| w)
            .chain(self.eta.iter())
            .map(|w| w.check_monotonicity(grid))
            .collect()
    }
}

/// `n` points evenly covering the open interval `(lo, hi)`.
pub fn open_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let h = (hi - lo) / (n as f64 + 1.0);
    (1..=n).map(|i| lo + i as f64 * h).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_derivative() {
        let p = Polynomial(alloc::vec![1.0, 0.0, 3.0]);
        assert_eq!(p.value(2.0), 13.0);
        assert_eq!(p.derivative(2.0), 12.0);
        let w = Weight::new(p, Monotonicity::Increasing);
        let grid = open_grid(0.0, 3.0, 50);
        assert!(w.check_monotonicity(&grid).holds);
        assert!(w.derivative_mismatch(&grid, 1e-4) < 1e-6);
    }

    #[test]
    fn declared_direction_is_checked() {
        let w = Weight::new(FnRadial { f: |r: f64| (-r).exp(), df: |r: f64| -(-r).exp() }, Monotonicity::Increasing);
        let check = w.check_monotonicity(&open_grid(0.0, 1.0, 10));
        assert!(!check.holds);
        assert!(check.margin < 0.0);
        assert!(Weight::constant(2.0).check_monotonicity(&[0.0, 1.0]).holds);
    }
}
