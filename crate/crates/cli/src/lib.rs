//! Configuration-driven runner for the fbbm-core experiments.
//!
//! A run reads one TOML scenario, dispatches it to the owning module, and
//! writes CSV series, plot-ready two-column data, a JSON summary and, last,
//! an atomically written `manifest.json` into a run directory.

pub mod config;
pub mod manifest;
pub mod output;
pub mod scenarios;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};

pub use config::{parse_config, ConfigError, Scenario, ScenarioConfig, Violation};
pub use manifest::{Check, GridSummary, Relation, RunManifest, Summary};
pub use output::{config_hash, TOOL_VERSION};
pub use scenarios::{execute, Outcome};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "FBBM_OUT";
pub const DEFAULT_OUT_ROOT: &str = "fbbm-runs";

pub const SUMMARY_SCHEMA: &str = include_str!("../schemas/summary.schema.json");
pub const MANIFEST_SCHEMA: &str = include_str!("../schemas/manifest.schema.json");

/// Where a run writes: an explicit directory (command line, then config),
/// else `<root>/<scenario>-<hash prefix>` under `$FBBM_OUT` or `./fbbm-runs`.
pub fn resolve_run_dir(cfg: &ScenarioConfig, cli_out: Option<&Path>, env_root: Option<&Path>) -> PathBuf {
    if let Some(dir) = cli_out.or(cfg.out.as_deref()) {
        return dir.to_path_buf();
    }
    let root = env_root.unwrap_or(Path::new(DEFAULT_OUT_ROOT));
    root.join(format!("{}-{}", cfg.scenario.name(), &config_hash(cfg)[..12]))
}

pub fn summary_of(cfg: &ScenarioConfig, outcome: &Outcome) -> Summary {
    Summary {
        scenario: cfg.scenario.name().to_string(),
        tool_version: TOOL_VERSION.to_string(),
        config_hash: config_hash(cfg),
        passed: outcome.passed(),
        checks: outcome.checks.clone(),
        errors: outcome.errors.clone(),
        results: outcome.results.clone(),
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> Result<Vec<u8>> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s.into_bytes())
}

/// Runs `cfg` and persists everything under `run_dir`.
///
/// Module errors do not abort the run; they land in the manifest and make it
/// fail. The manifest is the last file written.
pub fn run_scenario(cfg: &ScenarioConfig, run_dir: &Path) -> Result<RunManifest> {
    let start = Instant::now();
    let outcome = execute(cfg);
    let hash = config_hash(cfg);
    let scenario = cfg.scenario.name();
    fs::create_dir_all(run_dir).with_context(|| format!("creating {}", run_dir.display()))?;

    let mut files = Vec::new();
    let mut put = |name: String, bytes: &[u8]| -> Result<()> {
        output::write_atomic(&run_dir.join(&name), bytes)?;
        files.push(name);
        Ok(())
    };
    if cfg.emit.csv {
        for t in &outcome.tables {
            put(format!("{}.csv", t.name), output::render_csv(t, scenario, &hash).as_bytes())?;
        }
    }
    if cfg.emit.plotdata {
        for p in &outcome.plots {
            put(format!("{}.dat", p.name), output::render_plot(p, scenario, &hash).as_bytes())?;
        }
    }
    if cfg.emit.json {
        put("summary.json".into(), &to_json(&summary_of(cfg, &outcome))?)?;
    }

    let manifest = RunManifest {
        tool: "fbbm".into(),
        tool_version: TOOL_VERSION.into(),
        config: cfg.clone(),
        config_hash: hash,
        grid: outcome.grid,
        run_dir: run_dir.to_path_buf(),
        threads: rayon::current_num_threads(),
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        passed: outcome.passed(),
        checks: outcome.checks,
        errors: outcome.errors,
        results: outcome.results,
        files,
    };
    output::write_atomic(&run_dir.join("manifest.json"), &to_json(&manifest)?)?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_directories_win_over_the_environment() {
        let cfg = parse_config("scenario = 'stein'\nalpha = 0.5\ntheta = 0.25\nout = 'from-config'\n").unwrap();
        let env = Path::new("/env");
        assert_eq!(resolve_run_dir(&cfg, Some(Path::new("cli")), Some(env)), PathBuf::from("cli"));
        assert_eq!(resolve_run_dir(&cfg, None, Some(env)), PathBuf::from("from-config"));
        let bare = ScenarioConfig { out: None, ..cfg };
        let d = resolve_run_dir(&bare, None, Some(env));
        assert!(d.starts_with(env));
        assert!(d.file_name().unwrap().to_string_lossy().starts_with("stein-"));
        assert!(resolve_run_dir(&bare, None, None).starts_with(DEFAULT_OUT_ROOT));
    }

    #[test]
    fn schemas_are_json() {
        for s in [SUMMARY_SCHEMA, MANIFEST_SCHEMA] {
            let v: serde_json::Value = serde_json::from_str(s).unwrap();
            assert!(v.get("$schema").is_some());
        }
    }
}
