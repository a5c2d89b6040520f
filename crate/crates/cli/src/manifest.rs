use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::config::ScenarioConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Lt,
    Ge,
    Gt,
}

/// An asserted inequality `measured <relation> threshold`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `None` when the measurement is not finite; such a check fails.
    pub measured: Option<f64>,
    pub relation: Relation,
    pub threshold: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, relation: Relation, threshold: f64) -> Self {
        let passed = measured.is_finite()
            && match relation {
                Relation::Le => measured <= threshold,
                Relation::Lt => measured < threshold,
                Relation::Ge => measured >= threshold,
                Relation::Gt => measured > threshold,
            };
        Self {
            name: name.into(),
            measured: measured.is_finite().then_some(measured),
            relation,
            threshold,
            passed,
        }
    }

    pub fn le(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(name, measured, Relation::Le, threshold)
    }

    pub fn ge(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(name, measured, Relation::Ge, threshold)
    }

    pub fn lt(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(name, measured, Relation::Lt, threshold)
    }

    pub fn gt(name: impl Into<String>, measured: f64, threshold: f64) -> Self {
        Self::new(name, measured, Relation::Gt, threshold)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub n: usize,
    pub half_length: f64,
    pub dx: f64,
}

impl GridSummary {
    pub fn new(n: usize, half_length: f64) -> Self {
        Self {
            n,
            half_length,
            dx: 2.0 * half_length / n as f64,
        }
    }
}

/// Deterministic part of a run: identical configs give identical summaries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub tool_version: String,
    pub config_hash: String,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub errors: Vec<String>,
    pub results: serde_json::Value,
}

/// Everything about a run, written last and atomically as `manifest.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub config: ScenarioConfig,
    pub config_hash: String,
    pub grid: Option<GridSummary>,
    pub run_dir: PathBuf,
    pub threads: usize,
    pub wall_clock_seconds: f64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub errors: Vec<String>,
    pub results: serde_json::Value,
    /// Files written besides the manifest, relative to `run_dir`.
    pub files: Vec<String>,
}

impl RunManifest {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn non_finite_measurements_fail() {
        let c = Check::le("x", f64::NAN, 1.0);
        assert!(!c.passed);
        assert_eq!(c.measured, None);
        assert!(!Check::ge("y", f64::INFINITY, 0.0).passed);
    }

    #[test]
    fn relations_are_strict_where_named() {
        assert!(Check::le("a", 1.0, 1.0).passed);
        assert!(!Check::lt("a", 1.0, 1.0).passed);
        assert!(Check::ge("a", 1.0, 1.0).passed);
        assert!(!Check::gt("a", 1.0, 1.0).passed);
    }
}
