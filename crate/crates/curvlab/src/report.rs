//! Versioned JSON reports and CSV profile tables.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use curvlab_core::quadrature::ConvergenceOrder;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Preconditions not met; the check did not run.
    Skipped,
    /// A hypothesis of the operation is violated by the input.
    Violated,
    /// Recorded numbers without a verdict.
    Info,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn is_failure(self) -> bool {
        matches!(self, Verdict::Fail | Verdict::Skipped | Verdict::Violated)
    }

    pub fn label(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Skipped => "skipped",
            Verdict::Violated => "violated",
            Verdict::Info => "info",
        }
    }
}

/// Convergence order between two grids: a number, or `"saturated"` when the
/// fine residual is at roundoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OrderRecord {
    Measured(f64),
    Label(Saturated),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Saturated {
    Saturated,
}

impl From<ConvergenceOrder> for OrderRecord {
    fn from(o: ConvergenceOrder) -> Self {
        match o {
            ConvergenceOrder::Measured(p) => OrderRecord::Measured(p),
            ConvergenceOrder::Saturated => OrderRecord::Label(Saturated::Saturated),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub experiment: String,
    pub name: String,
    /// Named numbers the verdict is derived from.
    pub values: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<OrderRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn new(experiment: &str, name: impl Into<String>, verdict: Verdict) -> Self {
        Self {
            experiment: experiment.to_string(),
            name: name.into(),
            values: BTreeMap::new(),
            resolution: None,
            order: None,
            tolerance: None,
            verdict,
            detail: None,
        }
    }

    pub fn value(mut self, key: &str, v: f64) -> Self {
        self.values.insert(key.to_string(), v);
        self
    }

    pub fn resolution(mut self, r: usize) -> Self {
        self.resolution = Some(r);
        self
    }

    pub fn order(mut self, o: Option<ConvergenceOrder>) -> Self {
        self.order = o.map(Into::into);
        self
    }

    pub fn tolerance(mut self, t: f64) -> Self {
        self.tolerance = Some(t);
        self
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    /// Abscissa (radius unless the table says otherwise).
    pub r: f64,
    pub value: f64,
    /// Total quadrature weight of the orbit, when meaningful.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileTable {
    pub experiment: String,
    pub quantity: String,
    /// Label of the abscissa, `r` or `resolution`.
    pub abscissa: String,
    pub rows: Vec<ProfileRow>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub violated: usize,
    pub info: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub experiment_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub seed: u64,
    pub config: serde_json::Value,
    pub checks: Vec<CheckRecord>,
    pub profiles: Vec<ProfileTable>,
    pub summary: Summary,
    pub pass: bool,
}

impl Report {
    pub fn new(id: &str, seed: u64, config: serde_json::Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            experiment_id: id.to_string(),
            timestamp: None,
            seed,
            config,
            checks: Vec::new(),
            profiles: Vec::new(),
            summary: Summary::default(),
            pass: true,
        }
    }

    pub fn stamp(&mut self) {
        self.timestamp = Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    }

    /// Recomputes the summary and overall verdict from the records.
    pub fn finalize(&mut self) {
        let mut s = Summary::default();
        for v in self.checks.iter().map(|c| c.verdict).chain(self.profiles.iter().map(|p| p.verdict)) {
            match v {
                Verdict::Pass => s.pass += 1,
                Verdict::Fail => s.fail += 1,
                Verdict::Skipped => s.skipped += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::Info => s.info += 1,
            }
        }
        self.pass = s.fail + s.skipped + s.violated == 0;
        self.summary = s;
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Writes `report.json` and one CSV per experiment with profiles.
    /// Returns the paths written.
    pub fn write(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::new();
        let json = dir.join("report.json");
        fs::write(&json, self.to_json()?).with_context(|| format!("writing {}", json.display()))?;
        written.push(json);
        let mut by_experiment: BTreeMap<&str, Vec<&ProfileTable>> = BTreeMap::new();
        for p in &self.profiles {
            by_experiment.entry(p.experiment.as_str()).or_default().push(p);
        }
        for (exp, tables) in by_experiment {
            let path = dir.join(format!("{}.csv", file_stem(exp)));
            write_csv(&path, &tables)?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Columns: `quantity, r, value, weight, verdict`.
pub fn write_csv(path: &Path, tables: &[&ProfileTable]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    w.write_record(["quantity", "r", "value", "weight", "verdict"])?;
    for t in tables {
        for row in &t.rows {
            w.write_record([
                t.quantity.clone(),
                format!("{:e}", row.r),
                format!("{:e}", row.value),
                row.weight.map(|x| format!("{x:e}")).unwrap_or_default(),
                t.verdict.label().to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}
