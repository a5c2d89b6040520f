//! Tables, plot data and the files they end up in.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// SHA-256 of the canonical JSON form of `cfg`, without the output directory
/// (where a run lands does not change what it computes).
pub fn config_hash(cfg: &ScenarioConfig) -> String {
    let canonical = ScenarioConfig {
        out: None,
        ..cfg.clone()
    };
    let json = serde_json::to_string(&canonical).expect("configs always serialize");
    hex::encode(Sha256::digest(json.as_bytes()))
}

/// Column name and unit.
#[derive(Clone, Debug)]
pub struct Column {
    pub name: String,
    pub unit: &'static str,
}

pub fn col(name: impl Into<String>, unit: &'static str) -> Column {
    Column {
        name: name.into(),
        unit,
    }
}

/// A CSV series.
#[derive(Clone, Debug)]
pub struct Table {
    /// File stem.
    pub name: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
}

/// A two-column curve for plotting.
#[derive(Clone, Debug)]
pub struct Plot {
    pub name: String,
    pub x: Column,
    pub y: Column,
    pub points: Vec<(f64, f64)>,
}

/// Shortest round-trip decimal; non-finite values print as `nan`/`inf`/`-inf`.
fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:e}")
    }
}

fn preamble(out: &mut String, scenario: &str, hash: &str) {
    writeln!(out, "# fbbm {TOOL_VERSION}").unwrap();
    writeln!(out, "# scenario {scenario}").unwrap();
    writeln!(out, "# config_sha256 {hash}").unwrap();
}

pub fn render_csv(table: &Table, scenario: &str, hash: &str) -> String {
    let mut out = String::new();
    preamble(&mut out, scenario, hash);
    let header: Vec<String> = table
        .columns
        .iter()
        .map(|c| format!("{}[{}]", c.name, c.unit))
        .collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| num(v)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Whitespace-separated two-column text with a `#` header.
pub fn render_plot(plot: &Plot, scenario: &str, hash: &str) -> String {
    let mut out = String::new();
    preamble(&mut out, scenario, hash);
    writeln!(
        out,
        "# {}[{}] {}[{}]",
        plot.x.name, plot.x.unit, plot.y.name, plot.y.unit
    )
    .unwrap();
    for &(x, y) in &plot.points {
        writeln!(out, "{} {}", num(x), num(y)).unwrap();
    }
    out
}

/// Writes through a temporary sibling and renames it into place.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .with_context(|| format!("{} has no file name", path.display()))?;
    let tmp: PathBuf = dir.join(format!(".{}.tmp", name.to_string_lossy()));
    {
        let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
        f.write_all(contents)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("moving {} into place", path.display()))?;
    Ok(())
}

/// Keeps file stems to `[A-Za-z0-9_.-]`.
pub fn slug(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            'a'..='z' | 'A'..='Z' | '0'..='9' | '.' | '-' | '_' => out.push(ch),
            '=' => {}
            _ => {
                if !out.ends_with('_') {
                    out.push('_');
                }
            }
        }
    }
    out.trim_matches('_').to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn csv_has_hash_header_units_and_lf() {
        let t = Table {
            name: "x".into(),
            columns: vec![col("t", "time"), col("mass", "1")],
            rows: vec![vec![0.0, 1.5], vec![0.1, f64::NAN]],
        };
        let s = render_csv(&t, "evolve", "abc");
        assert!(!s.contains('\r'));
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[2], "# config_sha256 abc");
        assert_eq!(lines[3], "t[time],mass[1]");
        assert_eq!(lines[4], "0e0,1.5e0");
        assert_eq!(lines[5], "1e-1,nan");
    }

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02e23] {
            assert_eq!(num(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn hash_ignores_output_directory_only() {
        let a = parse_config("scenario = 'stein'\nalpha = 0.5\ntheta = 0.25\n").unwrap();
        let b = parse_config("scenario = 'stein'\nalpha = 0.5\ntheta = 0.25\nout = '/tmp/x'\n").unwrap();
        let c = parse_config("scenario = 'stein'\nalpha = 0.5\ntheta = 0.3\n").unwrap();
        assert_eq!(config_hash(&a), config_hash(&b));
        assert_ne!(config_hash(&a), config_hash(&c));
        assert_eq!(config_hash(&a).len(), 64);
    }

    #[test]
    fn slugs_are_file_safe() {
        assert_eq!(slug("calderon(l=0,m=1)"), "calderon_l0_m1");
        assert_eq!(slug("dalpha(alpha=0.25,beta=0.5)"), "dalpha_alpha0.25_beta0.5");
    }
}
