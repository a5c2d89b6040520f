use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fbbm_cli::{
    config_hash, parse_config, resolve_run_dir, run_scenario, ScenarioConfig,
    MANIFEST_SCHEMA, OUT_ENV, SUMMARY_SCHEMA,
};

/// Exit status when a scenario runs but a check fails or a module errors.
const EXIT_CHECKS_FAILED: u8 = 1;
/// Exit status for unreadable or invalid configurations and I/O failures.
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "fbbm", version, about = "Spectral laboratory for the fractional BBM equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its outputs.
    Run {
        config: PathBuf,
        /// Run directory; defaults to the config's `out`, then
        /// `$FBBM_OUT/<scenario>-<hash>`, then `./fbbm-runs/<scenario>-<hash>`.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads for the scenario fan-out.
        #[arg(long)]
        threads: Option<usize>,
        /// Default output root.
        #[arg(long = "out-root", env = OUT_ENV, hide = true)]
        out_root: Option<PathBuf>,
    },
    /// Check a configuration without running it.
    Validate { config: PathBuf },
    /// Print the JSON schema of `summary.json` (or of `manifest.json`).
    Schema {
        #[arg(long)]
        manifest: bool,
    },
}

fn load(path: &Path) -> Result<ScenarioConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Schema { manifest } => {
            print!("{}", if manifest { MANIFEST_SCHEMA } else { SUMMARY_SCHEMA });
            ExitCode::SUCCESS
        }
        Command::Validate { config } => match load(&config) {
            Ok(cfg) => {
                println!("ok {} config_sha256 {}", cfg.scenario.name(), config_hash(&cfg));
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("{e}");
                ExitCode::from(EXIT_USAGE)
            }
        },
        Command::Run {
            config,
            out,
            seed,
            threads,
            out_root,
        } => {
            let mut cfg = match load(&config) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(t) = threads {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                    eprintln!("cannot start {t} threads: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            }
            let dir = resolve_run_dir(&cfg, out.as_deref(), out_root.as_deref());
            let manifest = match run_scenario(&cfg, &dir) {
                Ok(m) => m,
                Err(e) => {
                    eprintln!("{e:#}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            for c in &manifest.checks {
                let measured = c.measured.map_or("non-finite".to_string(), |v| format!("{v:.6e}"));
                println!(
                    "{} {} = {measured} ({:?} {:e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.relation,
                    c.threshold
                );
            }
            for e in &manifest.errors {
                println!("ERROR {e}");
            }
            println!(
                "{} in {:.2} s -> {}",
                if manifest.passed { "passed" } else { "failed" },
                manifest.wall_clock_seconds,
                dir.join("manifest.json").display()
            );
            if manifest.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_CHECKS_FAILED)
            }
        }
    }
}
