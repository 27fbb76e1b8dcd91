//! TOML experiment configuration.
//!
//! ```toml
//! id = "torus-demo"
//! seed = 7
//!
//! [space]
//! kind = "euclidean"
//! n = 3
//!
//! [[experiment]]
//! operation = "verify-weighted-hm"
//! surface = { family = "torus3", r1 = 2.0, r2 = 0.5 }
//! resolution = { coarse = 128, fine = 256 }
//! orders = [1, 2]
//! phi = "r^2"
//! tol = 1e-6
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub id: String,
    #[serde(default)]
    pub seed: u64,
    /// Default ambient for experiments that do not name their own.
    pub space: Option<SpaceConfig>,
    #[serde(default, rename = "experiment")]
    pub experiments: Vec<Experiment>,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Directory for `report.json`, CSV tables and plots.
    pub dir: Option<String>,
    /// Leave the timestamp out of the JSON report.
    #[serde(default)]
    pub omit_timestamp: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpaceConfig {
    /// `euclidean`, `hyperbolic`, `spherical_hemisphere`, `schwarzschild`
    /// or `reissner_nordstrom`.
    pub kind: String,
    pub n: usize,
    pub mass: Option<f64>,
    pub charge: Option<f64>,
    /// Radial extent tabulated for ODE-defined warping functions.
    pub extent: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum SurfaceConfig {
    Slice {
        r0: f64,
    },
    Sphere {
        #[serde(default)]
        offset: f64,
        radius: f64,
    },
    Torus3 {
        r1: f64,
        r2: f64,
    },
    Torus4 {
        r1: f64,
        r2: f64,
    },
    Ellipsoid {
        semi_axes: Vec<f64>,
    },
    /// `rho` is an expression in `theta`, `z`, `x1..xn`.
    RadialGraph {
        rho: String,
    },
}

/// One grid, or a coarse/fine pair for convergence studies.
#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Resolution {
    Single(usize),
    Pair { coarse: usize, fine: usize },
}

impl Resolution {
    pub fn fine(&self) -> usize {
        match *self {
            Resolution::Single(r) => r,
            Resolution::Pair { fine, .. } => fine,
        }
    }

    pub fn coarse(&self) -> Option<usize> {
        match *self {
            Resolution::Single(_) => None,
            Resolution::Pair { coarse, .. } => Some(coarse),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Resolution::Pair { coarse, fine } = *self {
            if fine != 2 * coarse {
                bail!("convergence mode needs fine = 2 x coarse, got {coarse} and {fine}");
            }
        }
        Ok(())
    }
}

fn default_resolution() -> Resolution {
    Resolution::Single(64)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum BrendleExpect {
    /// `|gap| < tol · area`.
    Equality,
    /// `gap > 10 · tol · area`.
    Strict,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum SolitonExpect {
    /// Residual below `tol` and `μ = 1` within `tol`.
    Soliton,
    /// Sup residual at least `min_residual`.
    NotSoliton,
}

/// Expected pass/fail per condition; unspecified conditions must pass.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ConditionExpect {
    pub h1: Option<bool>,
    pub h2: Option<bool>,
    pub h3: Option<bool>,
    pub h4: Option<bool>,
}

/// `(i, j, a_ij)` soliton weight.
/// Radial weights keyed by curvature order. TOML table keys are strings,
/// so orders are parsed on use.
pub type WeightMap = BTreeMap<String, String>;

/// Entries of a weight map as `(order, expression)`, sorted by order.
pub fn weight_orders(map: &WeightMap) -> Result<Vec<(usize, &str)>> {
    let mut out = map
        .iter()
        .map(|(k, v)| {
            let j = k.trim().parse::<usize>().with_context(|| format!("weight key {k:?} is not an order"))?;
            Ok((j, v.as_str()))
        })
        .collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|e| e.0);
    Ok(out)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct Pair(pub usize, pub usize, pub f64);

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "operation", rename_all = "kebab-case")]
pub enum Operation {
    CheckConditions {
        #[serde(default = "default_grid_points")]
        grid_points: usize,
        /// Largest radius sampled (capped by the space's domain).
        grid_max: Option<f64>,
        #[serde(default)]
        expect: ConditionExpect,
        /// Also check the Ricci coefficients against these values.
        ricci: Option<RicciExpect>,
    },
    VerifyHm {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
        #[serde(default = "default_orders")]
        orders: Vec<usize>,
    },
    VerifyWeightedHm {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
        #[serde(default = "default_orders")]
        orders: Vec<usize>,
        #[serde(default = "default_phi")]
        phi: String,
    },
    XiRicSign {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
    },
    Brendle {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
        expect: Option<BrendleExpect>,
    },
    EllipticPoint {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
    },
    TorusCounterexample {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
        /// In-orbit spread tolerance, relative to the range of the quantity.
        spread_tol: Option<f64>,
    },
    SolitonCheck {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
        pairs: Vec<Pair>,
        mu: Option<f64>,
        expect: Option<SolitonExpect>,
        min_residual: Option<f64>,
    },
    RadialCondition {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
        k: usize,
        /// Order → expression for `b_j(r)`.
        #[serde(default)]
        b: WeightMap,
        #[serde(default)]
        c: WeightMap,
        eta: String,
    },
    RatioCondition {
        surface: SurfaceConfig,
        #[serde(default = "default_resolution")]
        resolution: Resolution,
        #[serde(default)]
        a: WeightMap,
        #[serde(default)]
        b: WeightMap,
    },
    NewtonProps {
        #[serde(default = "default_oracle_vectors")]
        oracle_vectors: usize,
        #[serde(default = "default_garding_samples")]
        garding_samples: usize,
        #[serde(default = "default_max_m")]
        max_m: usize,
    },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RicciExpect {
    pub alpha: f64,
    pub beta: f64,
}

fn default_grid_points() -> usize {
    100
}
fn default_orders() -> Vec<usize> {
    vec![1]
}
fn default_phi() -> String {
    "1".into()
}
fn default_oracle_vectors() -> usize {
    10_000
}
fn default_garding_samples() -> usize {
    100_000
}
fn default_max_m() -> usize {
    8
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Experiment {
    /// Report label; defaults to the operation name and index.
    pub name: Option<String>,
    pub space: Option<SpaceConfig>,
    pub tol: Option<f64>,
    /// Force the immersion engine even for closed-form families.
    #[serde(default)]
    pub engine: bool,
    #[serde(flatten)]
    pub operation: Operation,
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::CheckConditions { .. } => "check-conditions",
            Operation::VerifyHm { .. } => "verify-hm",
            Operation::VerifyWeightedHm { .. } => "verify-weighted-hm",
            Operation::XiRicSign { .. } => "xi-ric-sign",
            Operation::Brendle { .. } => "brendle",
            Operation::EllipticPoint { .. } => "elliptic-point",
            Operation::TorusCounterexample { .. } => "torus-counterexample",
            Operation::SolitonCheck { .. } => "soliton-check",
            Operation::RadialCondition { .. } => "radial-condition",
            Operation::RatioCondition { .. } => "ratio-condition",
            Operation::NewtonProps { .. } => "newton-props",
        }
    }

    pub fn resolution(&self) -> Option<Resolution> {
        match self {
            Operation::VerifyHm { resolution, .. }
            | Operation::VerifyWeightedHm { resolution, .. }
            | Operation::XiRicSign { resolution, .. }
            | Operation::Brendle { resolution, .. }
            | Operation::EllipticPoint { resolution, .. }
            | Operation::TorusCounterexample { resolution, .. }
            | Operation::SolitonCheck { resolution, .. }
            | Operation::RadialCondition { resolution, .. }
            | Operation::RatioCondition { resolution, .. } => Some(*resolution),
            Operation::CheckConditions { .. } | Operation::NewtonProps { .. } => None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Structural checks that need no geometry: resolutions, expression
    /// syntax and the presence of a space.
    pub fn validate(&self) -> Result<()> {
        if self.experiments.is_empty() {
            bail!("config `{}` has no [[experiment]] entries", self.id);
        }
        for (i, e) in self.experiments.iter().enumerate() {
            let label = e.name.clone().unwrap_or_else(|| format!("#{i} {}", e.operation.name()));
            let ctx = || format!("experiment {label}");
            if e.space.is_none() && self.space.is_none() && !matches!(e.operation, Operation::NewtonProps { .. }) {
                bail!("{}: no [space] given", ctx());
            }
            if let Some(r) = e.operation.resolution() {
                r.validate().with_context(ctx)?;
            }
            match &e.operation {
                Operation::RadialCondition { b, c, .. } => {
                    weight_orders(b).with_context(ctx)?;
                    weight_orders(c).with_context(ctx)?;
                }
                Operation::RatioCondition { a, b, .. } => {
                    weight_orders(a).with_context(ctx)?;
                    weight_orders(b).with_context(ctx)?;
                }
                _ => {}
            }
            for src in e.operation.expressions() {
                crate::expr::Expr::parse(src).with_context(ctx)?;
            }
        }
        Ok(())
    }
}

impl Operation {
    fn expressions(&self) -> Vec<&str> {
        let mut out = Vec::new();
        match self {
            Operation::VerifyWeightedHm { phi, .. } => out.push(phi.as_str()),
            Operation::RadialCondition { b, c, eta, .. } => {
                out.extend(b.values().chain(c.values()).map(String::as_str));
                out.push(eta.as_str());
            }
            Operation::RatioCondition { a, b, .. } => out.extend(a.values().chain(b.values()).map(String::as_str)),
            _ => {}
        }
        if let Some(SurfaceConfig::RadialGraph { rho }) = self.surface() {
            out.push(rho.as_str());
        }
        out
    }

    pub fn surface(&self) -> Option<&SurfaceConfig> {
        match self {
            Operation::VerifyHm { surface, .. }
            | Operation::VerifyWeightedHm { surface, .. }
            | Operation::XiRicSign { surface, .. }
            | Operation::Brendle { surface, .. }
            | Operation::EllipticPoint { surface, .. }
            | Operation::TorusCounterexample { surface, .. }
            | Operation::SolitonCheck { surface, .. }
            | Operation::RadialCondition { surface, .. }
            | Operation::RatioCondition { surface, .. } => Some(surface),
            Operation::CheckConditions { .. } | Operation::NewtonProps { .. } => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
id = "demo"
seed = 3

[space]
kind = "schwarzschild"
n = 3
mass = 1.0

[[experiment]]
operation = "check-conditions"
expect = { h3 = true }

[[experiment]]
name = "torus"
operation = "verify-weighted-hm"
space = { kind = "euclidean", n = 3 }
surface = { family = "torus3", r1 = 2.0, r2 = 0.5 }
resolution = { coarse = 32, fine = 64 }
orders = [1, 2]
phi = "r^2"
tol = 1e-6

[[experiment]]
operation = "soliton-check"
space = { kind = "euclidean", n = 4 }
surface = { family = "sphere", radius = 1.0 }
pairs = [[0, 1, 0.5], [1, 3, 0.5]]
expect = "soliton"
"#;

    #[test]
    fn parses_sample() {
        let cfg = ExperimentConfig::from_toml(SAMPLE).unwrap();
        assert_eq!(cfg.experiments.len(), 3);
        assert_eq!(cfg.experiments[1].operation.resolution(), Some(Resolution::Pair { coarse: 32, fine: 64 }));
        match &cfg.experiments[2].operation {
            Operation::SolitonCheck { pairs, expect, .. } => {
                assert_eq!(pairs[1], Pair(1, 3, 0.5));
                assert_eq!(*expect, Some(SolitonExpect::Soliton));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let bad_pair = SAMPLE.replace("coarse = 32", "coarse = 30");
        assert!(ExperimentConfig::from_toml(&bad_pair).is_err());
        let bad_expr = SAMPLE.replace("\"r^2\"", "\"r^\"");
        assert!(ExperimentConfig::from_toml(&bad_expr).is_err());
        let bad_op = SAMPLE.replace("\"check-conditions\"", "\"check-everything\"");
        assert!(ExperimentConfig::from_toml(&bad_op).is_err());
        assert!(ExperimentConfig::from_toml("id = \"x\"").is_err());
    }
}
