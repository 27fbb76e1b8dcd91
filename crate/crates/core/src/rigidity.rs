//! Hypothesis residuals for the radial rigidity theorems and the soliton
//! suite. Nothing here proves rigidity; the evaluators measure how far a
//! concrete cloud is from satisfying each hypothesis or inequality.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
// float math for no_std builds; shadowed by inherent methods when std is linked
#[allow(unused_imports)]
use num_traits::Float;

use crate::radial::{Weight, WeightFamily};
use crate::surfaces::SurfaceCloud;
use crate::symfun::{normalized_hs, CurvatureVector};
use crate::{Error, Result};

/// Tolerance for `Σ a_{i,j} = 1`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

fn check_positive(cloud: &SurfaceCloud, upto: usize) -> Result<()> {
    if upto > cloud.m() {
        return Err(Error::OrderOutOfRange { k: upto, max: cloud.m() });
    }
    for (i, s) in cloud.samples.iter().enumerate() {
        let hs = normalized_hs(&s.lambdas);
        if let Some(q) = (1..=upto).find(|&q| !(hs[q] > 0.0)) {
            return Err(Error::HypothesisViolation { what: format!("H_{q} = {:e} <= 0", hs[q]), sample: Some(i) });
        }
    }
    Ok(())
}

/// Supremum of a pointwise residual with its location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupResidual {
    pub sup: f64,
    pub witness: usize,
}

impl SupResidual {
    fn over(values: impl Iterator<Item = f64>) -> Self {
        values.enumerate().fold(SupResidual { sup: 0.0, witness: 0 }, |acc, (i, v)| {
            if v.abs() > acc.sup {
                SupResidual { sup: v.abs(), witness: i }
            } else {
                acc
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialConditionResidual {
    /// `sup |Σ (b_j H_j + c_j H_1 H_{j-1}) - η|`.
    pub raw: SupResidual,
    /// The same divided by `η`.
    pub normalized: SupResidual,
}

/// Residual of `Σ_j (b_j(r) H_j + c_j(r) H_1 H_{j-1}) = η(r)`. Requires
/// `H_k > 0` (and hence lower orders) on the cloud and `η > 0`.
pub fn radial_condition_residual(
    cloud: &SurfaceCloud,
    weights: &WeightFamily,
    k: usize,
) -> Result<RadialConditionResidual> {
    check_positive(cloud, k)?;
    let eta = weights.eta.as_ref().ok_or_else(|| Error::Precondition("η is required".into()))?;
    let mut raw = Vec::with_capacity(cloud.len());
    let mut normalized = Vec::with_capacity(cloud.len());
    for (i, s) in cloud.samples.iter().enumerate() {
        let hs = normalized_hs(&s.lambdas);
        let e = eta.value(s.r);
        if !(e > 0.0) {
            return Err(Error::HypothesisViolation { what: format!("η = {e:e} <= 0"), sample: Some(i) });
        }
        let mut lhs = 0.0;
        for (j, b) in &weights.b {
            lhs += b.value(s.r) * order(&hs, *j)?;
        }
        for (j, c) in &weights.c {
            if *j == 0 {
                return Err(Error::OrderOutOfRange { k: 0, max: cloud.m() });
            }
            lhs += c.value(s.r) * hs[1] * order(&hs, *j - 1)?;
        }
        raw.push(lhs - e);
        normalized.push(lhs / e - 1.0);
    }
    Ok(RadialConditionResidual {
        raw: SupResidual::over(raw.into_iter()),
        normalized: SupResidual::over(normalized.into_iter()),
    })
}

fn order(hs: &[f64], j: usize) -> Result<f64> {
    hs.get(j).copied().ok_or(Error::OrderOutOfRange { k: j, max: hs.len() - 1 })
}

/// `sup |Σ a_i(r) H_i - Σ b_j(r) H_j|` with `a` and `b` taken from the
/// family.
pub fn ratio_condition_residual(cloud: &SurfaceCloud, weights: &WeightFamily) -> Result<SupResidual> {
    let top = weights.b.iter().chain(&weights.a).map(|(j, _)| *j).max().unwrap_or(0);
    check_positive(cloud, top)?;
    let mut values = Vec::with_capacity(cloud.len());
    for s in &cloud.samples {
        let hs = normalized_hs(&s.lambdas);
        let mut v = 0.0;
        for (i, a) in &weights.a {
            v += a.value(s.r) * order(&hs, *i)?;
        }
        for (j, b) in &weights.b {
            v -= b.value(s.r) * order(&hs, *j)?;
        }
        values.push(v);
    }
    Ok(SupResidual::over(values.into_iter()))
}

/// `sup |H_k/H_l - η(r)|`.
pub fn ratio_eta_residual(cloud: &SurfaceCloud, k: usize, l: usize, eta: &Weight) -> Result<SupResidual> {
    check_positive(cloud, k.max(l))?;
    let mut values = Vec::with_capacity(cloud.len());
    for s in &cloud.samples {
        let hs = normalized_hs(&s.lambdas);
        values.push(order(&hs, k)? / order(&hs, l)? - eta.value(s.r));
    }
    Ok(SupResidual::over(values.into_iter()))
}

/// Constant weights `a_{i,j}` of the soliton equation
/// `Σ a_{i,j} (H_i/H_j)^{1/(j-i)} = μ p`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonSpec {
    pairs: Vec<(usize, usize, f64)>,
    mu: Option<f64>,
    k: usize,
}

impl SolitonSpec {
    pub fn new(pairs: Vec<(usize, usize, f64)>, mu: Option<f64>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Precondition("no weight pairs".into()));
        }
        let mut total = 0.0;
        for &(i, j, a) in &pairs {
            if i >= j {
                return Err(Error::Precondition(format!("pair ({i}, {j}) needs i < j")));
            }
            if !(a >= 0.0) {
                return Err(Error::Precondition(format!("weight {a} on ({i}, {j}) is negative")));
            }
            total += a;
        }
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::Precondition(format!("weights sum to {total}, not 1")));
        }
        if let Some(mu) = mu {
            if !(mu > 0.0) {
                return Err(Error::Precondition(format!("μ = {mu} must be positive")));
            }
        }
        let k = pairs.iter().filter(|p| p.2 > 0.0).map(|p| p.1).max().unwrap_or(0);
        if k == 0 {
            return Err(Error::Precondition("all weights vanish".into()));
        }
        Ok(Self { pairs, mu, k })
    }

    /// Equal weight on every pair `0 <= i < j <= m`.
    pub fn uniform(m: usize) -> Result<Self> {
        let count = m * (m + 1) / 2;
        let pairs = (0..m)
            .flat_map(|i| (i + 1..=m).map(move |j| (i, j, 1.0 / count as f64)))
            .collect::<Vec<_>>();
        // renormalize the rounding of 1/count
        let mut pairs = pairs;
        let total: f64 = pairs.iter().map(|p| p.2).sum();
        pairs.iter_mut().for_each(|p| p.2 /= total);
        Self::new(pairs, None)
    }

    pub fn pairs(&self) -> &[(usize, usize, f64)] {
        &self.pairs
    }

    pub fn mu(&self) -> Option<f64> {
        self.mu
    }

    /// Largest `j` carrying positive weight.
    pub fn k(&self) -> usize {
        self.k
    }

    fn active(&self) -> impl Iterator<Item = &(usize, usize, f64)> {
        self.pairs.iter().filter(|p| p.2 > 0.0)
    }

    fn speed(&self, hs: &[f64]) -> f64 {
        self.active().map(|&(i, j, a)| a * (hs[i] / hs[j]).powf(1.0 / (j - i) as f64)).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolitonResidual {
    pub mu: f64,
    pub fitted: bool,
    /// `sup |S - μ p|`.
    pub sup: f64,
    /// `∫ |S - μ p|`.
    pub integral: f64,
}

/// Fits `μ = ∫ S p / ∫ p²` unless the spec fixes it.
pub fn soliton_residual(cloud: &SurfaceCloud, spec: &SolitonSpec) -> Result<SolitonResidual> {
    check_positive(cloud, spec.k)?;
    let speeds: Vec<f64> = cloud.samples.iter().map(|s| spec.speed(&normalized_hs(&s.lambdas))).collect();
    let (mu, fitted) = match spec.mu {
        Some(mu) => (mu, false),
        None => {
            let sp: Vec<f64> = speeds.iter().zip(&cloud.samples).map(|(v, s)| v * s.support).collect();
            let sp = cloud.weighted_sum(&sp);
            let pp = cloud.integrate(|s| s.support * s.support);
            (sp / pp, true)
        }
    };
    let diffs: Vec<f64> = speeds.iter().zip(&cloud.samples).map(|(sp, s)| sp - mu * s.support).collect();
    let sup = diffs.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let abs: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let integral = cloud.weighted_sum(&abs);
    Ok(SolitonResidual { mu, fitted, sup, integral })
}

/// Relative slacks of `H_0/H_1 <= (H_i/H_j)^{1/(j-i)} <= H_{j-1}/H_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BracketSlack {
    pub upper: f64,
    pub lower: f64,
}

fn relative(big: f64, small: f64) -> f64 {
    let scale = big.abs().max(small.abs());
    if scale == 0.0 {
        0.0
    } else {
        (big - small) / scale
    }
}

/// Pointwise bracket for one pair; needs `H_1..H_j > 0`.
pub fn bracket_slack(lambda: &CurvatureVector, i: usize, j: usize) -> Result<BracketSlack> {
    if i >= j || j > lambda.m() {
        return Err(Error::Precondition(format!("pair ({i}, {j}) out of range")));
    }
    let hs = normalized_hs(lambda);
    if let Some(q) = (1..=j).find(|&q| !(hs[q] > 0.0)) {
        return Err(Error::HypothesisViolation { what: format!("H_{q} <= 0"), sample: None });
    }
    let mean = (hs[i] / hs[j]).powf(1.0 / (j - i) as f64);
    Ok(BracketSlack { upper: relative(hs[j - 1] / hs[j], mean), lower: relative(mean, 1.0 / hs[1]) })
}

/// One inequality of the proof chain with its worst slack.
#[derive(Debug, Clone, PartialEq)]
pub struct LedgerEntry {
    pub name: String,
    /// Relative slack; nonnegative when the inequality holds.
    pub min_slack: f64,
    /// Integrated comparisons only follow from an exact soliton.
    pub applicable: bool,
    pub holds: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChainBranch {
    /// `k = 1`: only `H_0/H_1` appears; closes with `H_2/H_1 <= H_1`.
    K1,
    /// `k >= 2`: closes with the two-sided Maclaurin bracket.
    K2Plus,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProofChain {
    pub branch: ChainBranch,
    pub residual: SolitonResidual,
    pub exact_soliton: bool,
    pub entries: Vec<LedgerEntry>,
}

impl ProofChain {
    /// All applicable entries hold.
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| !e.applicable || e.holds)
    }
}

/// Pointwise slack floor for the bracket inequalities.
pub const BRACKET_TOL: f64 = 1e-12;

/// Evaluates every inequality used to force `μ = 1`. Pointwise entries
/// always apply; the integrated comparisons apply when the cloud solves the
/// soliton equation to within `tol` (sup residual).
pub fn soliton_proof_chain(cloud: &SurfaceCloud, spec: &SolitonSpec, tol: f64) -> Result<ProofChain> {
    let residual = soliton_residual(cloud, spec)?;
    let exact = residual.sup <= tol;
    let mu = residual.mu;
    let k = spec.k;
    let area = cloud.area();
    let mut entries = Vec::new();
    let mut push = |name: String, slack: f64, applicable: bool, floor: f64| {
        entries.push(LedgerEntry { name, min_slack: slack, applicable, holds: slack >= -floor });
    };

    let branch = if k == 1 { ChainBranch::K1 } else { ChainBranch::K2Plus };
    for &(i, j, _) in spec.active() {
        let mut upper = f64::INFINITY;
        let mut lower = f64::INFINITY;
        for s in &cloud.samples {
            let b = bracket_slack(&s.lambdas, i, j)?;
            upper = upper.min(b.upper);
            lower = lower.min(b.lower);
        }
        push(format!("(H_{i}/H_{j})^(1/{}) <= H_{}/H_{j}", j - i, j - 1), upper, true, BRACKET_TOL);
        push(format!("(H_{i}/H_{j})^(1/{}) >= H_0/H_1", j - i), lower, true, BRACKET_TOL);
    }

    let hs: Vec<Vec<f64>> = cloud.samples.iter().map(|s| normalized_hs(&s.lambdas)).collect();
    let integral = |f: &dyn Fn(&[f64], f64) -> f64| {
        let v: Vec<f64> = hs.iter().zip(&cloud.samples).map(|(h, s)| f(h, s.support)).collect();
        cloud.weighted_sum(&v)
    };
    match branch {
        ChainBranch::K2Plus => {
            let upper = hs
                .iter()
                .map(|h| relative(h[k - 1] / h[k], spec.speed(h)))
                .fold(f64::INFINITY, f64::min);
            push(format!("S <= H_{}/H_{k}", k - 1), upper, true, BRACKET_TOL);
            let lower = hs.iter().map(|h| relative(spec.speed(h), 1.0 / h[1])).fold(f64::INFINITY, f64::min);
            push("S >= H_0/H_1".into(), lower, true, BRACKET_TOL);
            let a = integral(&|h, _| h[k - 1]);
            let b = mu * integral(&|h, p| h[k] * p);
            push(format!("mu * int H_{k} p <= int H_{}", k - 1), (a - b) / area, exact, tol);
        }
        ChainBranch::K1 => {
            if cloud.m() >= 2 {
                let slack = hs.iter().map(|h| relative(h[1], h[2] / h[1])).fold(f64::INFINITY, f64::min);
                push("H_2/H_1 <= H_1/H_0".into(), slack, true, BRACKET_TOL);
                let a = integral(&|h, _| h[1]);
                let b = mu * integral(&|h, p| h[2] * p);
                push("mu * int H_2 p <= int H_1".into(), (a - b) / area, exact, tol);
            }
        }
    }
    let a = mu * integral(&|h, p| h[1] * p);
    let b = integral(&|_, _| 1.0);
    push("mu * int H_1 p >= int H_0".into(), (a - b) / area, exact, tol);
    push("|mu - 1|".into(), -(mu - 1.0).abs(), exact, tol);
    Ok(ProofChain { branch, residual, exact_soliton: exact, entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ambient::WarpedSpace;
    use crate::radial::{FnRadial, Monotonicity};
    use crate::surfaces::{build_surface, torus3_h1_of_r, SurfaceSpec};
    use crate::symfun::garding_sample;
    use alloc::vec;

    fn sphere(n: usize, offset: f64, radius: f64, res: usize) -> SurfaceCloud {
        build_surface(&SurfaceSpec::Sphere { offset, radius }, &WarpedSpace::euclidean(n).unwrap(), res).unwrap()
    }

    #[test]
    fn radial_condition_on_umbilic_families() {
        let r = 1.7;
        let cloud = sphere(3, 0.0, r, 8);
        let w = WeightFamily::default().with_b(1, Weight::constant(1.0)).with_eta(Weight::constant(1.0 / r));
        assert!(radial_condition_residual(&cloud, &w, 1).unwrap().raw.sup < 1e-15);

        let space = WarpedSpace::schwarzschild(3, 1.0).unwrap();
        let slice = build_surface(&SurfaceSpec::Slice { r0: 0.9 }, &space, 8).unwrap();
        let wv = space.warp(0.9).unwrap();
        let w = WeightFamily::default()
            .with_b(2, Weight::constant(1.0))
            .with_eta(Weight::constant((wv.dh / wv.h).powi(2)));
        assert!(radial_condition_residual(&slice, &w, 2).unwrap().raw.sup < 1e-15);
        let bad = WeightFamily::default().with_b(1, Weight::constant(1.0)).with_eta(Weight::constant(-1.0));
        assert!(radial_condition_residual(&cloud, &bad, 1).is_err());
    }

    #[test]
    fn torus_satisfies_increasing_radial_condition() {
        let cloud = build_surface(&SurfaceSpec::Torus3 { r1: 2.0, r2: 0.5 }, &WarpedSpace::euclidean(3).unwrap(), 32)
            .unwrap();
        let eta = FnRadial {
            f: |r: f64| torus3_h1_of_r(2.0, 0.5, r),
            df: |_: f64| f64::NAN,
        };
        let w = WeightFamily::default()
            .with_b(1, Weight::constant(1.0))
            .with_eta(Weight::new(eta, Monotonicity::Increasing));
        assert!(radial_condition_residual(&cloud, &w, 1).unwrap().raw.sup < 1e-12);
    }

    #[test]
    fn ratio_condition_on_sphere() {
        let r = 1.3;
        let cloud = sphere(3, 0.0, r, 8);
        let w = WeightFamily::default().with_a(1, Weight::constant(1.0)).with_b(2, Weight::constant(r));
        assert!(ratio_condition_residual(&cloud, &w).unwrap().sup < 1e-15);
        assert!(ratio_eta_residual(&cloud, 2, 1, &Weight::constant(1.0 / r)).unwrap().sup < 1e-15);
    }

    #[test]
    fn soliton_spec_validation() {
        assert!(SolitonSpec::new(vec![(0, 1, 0.5)], None).is_err());
        assert!(SolitonSpec::new(vec![(1, 1, 1.0)], None).is_err());
        assert!(SolitonSpec::new(vec![(0, 1, 1.5), (1, 2, -0.5)], None).is_err());
        let s = SolitonSpec::new(vec![(0, 1, 0.5), (1, 3, 0.5), (0, 2, 0.0)], None).unwrap();
        assert_eq!(s.k(), 3);
        assert_eq!(SolitonSpec::uniform(3).unwrap().pairs().len(), 6);
    }

    #[test]
    fn centered_sphere_is_a_soliton_with_unit_mu() {
        for r in [0.5, 1.0, 3.0] {
            let cloud = sphere(4, 0.0, r, 8);
            for spec in [
                SolitonSpec::new(vec![(0, 1, 1.0)], None).unwrap(),
                SolitonSpec::new(vec![(1, 3, 1.0)], None).unwrap(),
                SolitonSpec::uniform(3).unwrap(),
            ] {
                let res = soliton_residual(&cloud, &spec).unwrap();
                assert!((res.mu - 1.0).abs() < 1e-10 && res.sup < 1e-10 * r, "{res:?}");
                let chain = soliton_proof_chain(&cloud, &spec, 1e-10).unwrap();
                assert!(chain.exact_soliton && chain.holds(), "{chain:?}");
            }
        }
    }

    #[test]
    fn translated_sphere_is_not() {
        let cloud = sphere(3, 0.3, 1.0, 16);
        let spec = SolitonSpec::new(vec![(0, 1, 1.0)], None).unwrap();
        let res = soliton_residual(&cloud, &spec).unwrap();
        assert!(res.sup >= 0.25);
        let chain = soliton_proof_chain(&cloud, &spec, 1e-10).unwrap();
        assert_eq!(chain.branch, ChainBranch::K1);
        assert!(!chain.exact_soliton && chain.holds());
    }

    #[test]
    fn brackets_on_garding_samples() {
        for seed in 0..200 {
            let l = garding_sample(5, 4, seed).unwrap();
            for j in 1..=4 {
                for i in 0..j {
                    let b = bracket_slack(&l, i, j).unwrap();
                    assert!(b.upper >= -BRACKET_TOL && b.lower >= -BRACKET_TOL);
                }
            }
        }
    }
}
