//! Experiment runner for the curvature verification library: configuration,
//! dispatch, reports, plots.

pub mod config;
pub mod experiments;
pub mod expr;
pub mod geometry;
pub mod plot;
pub mod props;
pub mod report;
pub mod suite;
