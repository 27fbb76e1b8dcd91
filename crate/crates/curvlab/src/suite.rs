//! The built-in verification battery.

use anyhow::Result;

use crate::config::ExperimentConfig;

pub const PAPER_SUITE: &str = include_str!("../suites/battery.toml");

/// The built-in battery, with the seed optionally replaced.
pub fn paper_suite(seed: Option<u64>) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::from_toml(PAPER_SUITE)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    Ok(cfg)
}
