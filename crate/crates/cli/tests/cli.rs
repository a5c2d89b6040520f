use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fbbm() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fbbm"));
    c.env_remove("FBBM_OUT");
    c
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn run(cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    fbbm()
        .arg("run")
        .arg(cfg)
        .arg("--out")
        .arg(out)
        .args(extra)
        .output()
        .unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn check<'a>(manifest: &'a Value, name: &str) -> &'a Value {
    manifest["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name} in {}", manifest["checks"]))
}

fn schema(manifest: bool) -> Value {
    let mut c = fbbm();
    c.arg("schema");
    if manifest {
        c.arg("--manifest");
    }
    let out = c.output().unwrap();
    assert!(out.status.success());
    serde_json::from_slice(&out.stdout).unwrap()
}

fn assert_valid(schema: &Value, doc: &Value) {
    let compiled = jsonschema::JSONSchema::compile(schema).unwrap();
    let msgs: Vec<String> = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "schema violations: {msgs:?}");
}

const LINEAR: &str = "scenario = 'evolve'
alpha = 0.5
n = 1024
L = 50
dt = 0.01
T = 2
record_every = 10
nonlinear = false
r = [1.0]
";

#[test]
fn linear_evolution_conserves_l2_and_outputs_are_reproducible() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "linear.toml", LINEAR);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for dir in [&a, &b] {
        let out = run(&cfg, dir, &[]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    }
    let m = json(&a.join("manifest.json"));
    let drift = check(&m, "l2_drift_rel");
    assert_eq!(drift["passed"], true);
    assert!(drift["measured"].as_f64().unwrap() <= 1e-12);
    assert_eq!(m["grid"]["n"], 1024);

    let files: Vec<String> = m["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| f.as_str().unwrap().to_string())
        .collect();
    assert!(files.contains(&"diagnostics.csv".to_string()));
    assert!(files.contains(&"summary.json".to_string()));
    assert!(files.iter().any(|f| f.ends_with(".dat")));
    for f in &files {
        assert_eq!(
            fs::read(a.join(f)).unwrap(),
            fs::read(b.join(f)).unwrap(),
            "{f} differs between identical runs"
        );
    }
    let mb = json(&b.join("manifest.json"));
    assert_eq!(m["results"], mb["results"]);
    assert_eq!(m["config_hash"], mb["config_hash"]);
}

#[test]
fn csv_files_carry_the_config_hash_and_units() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "linear.toml", LINEAR);
    let dir = tmp.path().join("run");
    assert!(run(&cfg, &dir, &[]).status.success());
    let m = json(&dir.join("manifest.json"));
    let hash = m["config_hash"].as_str().unwrap();
    let csv = fs::read_to_string(dir.join("diagnostics.csv")).unwrap();
    assert!(!csv.contains('\r'));
    assert!(csv.lines().any(|l| l == format!("# config_sha256 {hash}")));
    let header = csv.lines().find(|l| !l.starts_with('#')).unwrap();
    assert!(header.starts_with("t[time],mass["), "{header}");
    assert!(header.contains("weighted_r1["));
    let data: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(data.len(), 21);
    let width = header.split(',').count();
    for row in data {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), width);
    }
    let dat = fs::read_to_string(dir.join("energy.dat")).unwrap();
    for l in dat.lines().filter(|l| !l.starts_with('#')) {
        assert_eq!(l.split_whitespace().count(), 2);
    }
}

#[test]
fn summaries_and_manifests_match_the_shipped_schemas() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "linear.toml", LINEAR);
    let dir = tmp.path().join("run");
    assert!(run(&cfg, &dir, &[]).status.success());
    assert_valid(&schema(false), &json(&dir.join("summary.json")));
    assert_valid(&schema(true), &json(&dir.join("manifest.json")));

    // a summary claiming another scenario's results shape is rejected
    let mut bad = json(&dir.join("summary.json"));
    bad["scenario"] = Value::from("ucp");
    let compiled = jsonschema::JSONSchema::compile(&schema(false)).unwrap();
    assert!(!compiled.is_valid(&bad));
}

#[test]
fn groundstate_at_alpha_two_matches_the_sech_squared_oracle() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "gs.toml",
        "scenario = 'groundstate'\nalpha = [2.0, 1.0]\nn = 1024\nL = 40\nc = 2.0\n",
    );
    let dir = tmp.path().join("gs");
    let out = run(&cfg, &dir, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let m = json(&dir.join("manifest.json"));
    let err = check(&m, "alpha=2.sech2_error_inf");
    assert!(err["measured"].as_f64().unwrap() <= 1e-6);
    assert_eq!(check(&m, "alpha=1.qc_residual_inf")["passed"], true);
    let entries = m["results"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert_eq!(entries[0]["alpha"], 2.0);
    assert!(entries[1]["sech2_error_inf"].is_null());
    assert!(dir.join("profile_alpha2.csv").exists());
    assert!(dir.join("qc_alpha1_c2.dat").exists());
    assert_valid(&schema(true), &m);
}

#[test]
fn module_errors_are_captured_and_fail_the_run() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "gs.toml",
        "scenario = 'groundstate'\nalpha = 0.5\nn = 512\nL = 40\nmax_iter = 2\n",
    );
    let dir = tmp.path().join("gs");
    let out = run(&cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(1));
    let m = json(&dir.join("manifest.json"));
    assert_eq!(m["passed"], false);
    let errors = m["errors"].as_array().unwrap();
    assert_eq!(errors.len(), 1);
    assert!(errors[0].as_str().unwrap().contains("did not converge"));
}

#[test]
fn failing_checks_give_a_nonzero_exit() {
    // a step far beyond explicit stability for this amplitude: the run is cut
    // short and never reaches T
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "ev.toml",
        "scenario = 'evolve'\nalpha = 0.5\nn = 256\nL = 20\ndt = 0.5\nT = 20\namplitude = 40\n",
    );
    let dir = tmp.path().join("ev");
    let out = run(&cfg, &dir, &[]);
    let m = json(&dir.join("manifest.json"));
    assert_eq!(m["passed"], false);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(check(&m, "final_time_reached")["passed"], false);
    assert_eq!(m["results"]["termination"]["BlowUpSuspected"].is_object(), true);
}

#[test]
fn ucp_residual_vanishes_for_zero_data_and_dominates_the_mass_otherwise() {
    let tmp = TempDir::new().unwrap();
    let base = "scenario = 'ucp'\nalpha = 0.5\nn = 1024\nL = 50\ndt = 0.01\nT = 2\nrecord_every = 10\nt1 = 0.5\nt2 = 2\n";
    let zero = write_config(tmp.path(), "zero.toml", &format!("{base}amplitude = 0\n"));
    let pos = write_config(tmp.path(), "pos.toml", &format!("{base}amplitude = 0.5\n"));
    let (dz, dp) = (tmp.path().join("z"), tmp.path().join("p"));
    assert!(run(&zero, &dz, &[]).status.success());
    assert!(run(&pos, &dp, &[]).status.success());
    let mz = json(&dz.join("manifest.json"));
    assert_eq!(mz["results"]["residual"], 0.0);
    let mp = json(&dp.join("manifest.json"));
    let r = mp["results"]["residual"].as_f64().unwrap();
    let m0 = mp["results"]["initial_mass"].as_f64().unwrap();
    assert!(m0 > 0.0 && r >= m0);
    assert_eq!(check(&mp, "residual_vs_initial_mass")["passed"], true);
}

#[test]
fn stein_scenario_records_fits_per_pair() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "stein.toml",
        "scenario = 'stein'\nalpha = [0.5]\ntheta = [0.25]\nper_decade = 8\n[emit]\nplotdata = false\n",
    );
    let dir = tmp.path().join("s");
    run(&cfg, &dir, &[]);
    let m = json(&dir.join("manifest.json"));
    let e = &m["results"]["entries"][0];
    for key in ["p_small", "p_large", "r2_small", "r2_large"] {
        assert!(e[key].as_f64().unwrap().is_finite(), "{key}");
    }
    assert!((e["p_large"].as_f64().unwrap() + 0.75).abs() < 0.1);
    assert!(m["grid"].is_null());
    let files = m["files"].as_array().unwrap();
    assert!(files.iter().all(|f| !f.as_str().unwrap().ends_with(".dat")));
    assert!(dir.join("stein_alpha0.5_theta0.25.csv").exists());
}

#[test]
fn weighted_growth_stays_below_the_ceiling() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "g.toml",
        "scenario = 'weighted-growth'\nalpha = [0.5, 0.75]\nr = [1.0, 0.5]\nn = 8192\nL = 200\nT = 10\n",
    );
    let dir = tmp.path().join("g");
    let out = run(&cfg, &dir, &[]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    let m = json(&dir.join("manifest.json"));
    assert_eq!(m["results"]["entries"].as_array().unwrap().len(), 2);
    assert_eq!(check(&m, "alpha=0.5,r=1.growth_slope")["threshold"], 1.2);
}

#[test]
fn radiation_reaching_the_box_edge_is_an_error_not_a_slope() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "g.toml",
        "scenario = 'weighted-growth'\nalpha = 0.5\nr = 1.0\nn = 1024\nL = 25\nT = 12\n",
    );
    let dir = tmp.path().join("g");
    let out = run(&cfg, &dir, &[]);
    assert_eq!(out.status.code(), Some(1));
    let m = json(&dir.join("manifest.json"));
    assert!(m["errors"][0].as_str().unwrap().contains("boundary contamination"));
    assert!(m["checks"].as_array().unwrap().is_empty());
}

#[test]
fn validate_lists_every_violation() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        "bad.toml",
        "scenario = 'ucp'\nalpha = 3\nt1 = 2\nt2 = 1\ndt = -0.01\nspeed = 4\n",
    );
    let out = fbbm().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    for needle in [
        "alpha must lie in (0, 2]",
        "t1 < t2 required",
        "dt must be positive",
        "line 6: speed: unknown key",
    ] {
        assert!(err.contains(needle), "missing `{needle}` in:\n{err}");
    }
}

#[test]
fn syntax_errors_are_reported_with_a_line() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", "scenario = 'evolve'\nalpha = = 0.5\n");
    let out = fbbm().arg("validate").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn seed_override_and_output_root_from_environment() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "linear.toml", LINEAR);
    let root = tmp.path().join("root");
    let out = fbbm()
        .env("FBBM_OUT", &root)
        .arg("run")
        .arg(&cfg)
        .args(["--seed", "7", "--threads", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let dirs: Vec<PathBuf> = fs::read_dir(&root).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1);
    let name = dirs[0].file_name().unwrap().to_string_lossy().to_string();
    assert!(name.starts_with("evolve-"));
    let m = json(&dirs[0].join("manifest.json"));
    assert_eq!(m["config"]["seed"], 7);
    assert_eq!(m["threads"], 1);
    assert!(m["config_hash"].as_str().unwrap().starts_with(&name["evolve-".len()..]));

    let plain = tmp.path().join("plain");
    run(&cfg, &plain, &[]);
    assert_ne!(json(&plain.join("manifest.json"))["config_hash"], m["config_hash"]);
}

#[test]
fn shipped_configs_validate() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let out = fbbm().arg("validate").arg(&path).output().unwrap();
            assert!(
                out.status.success(),
                "{}: {}",
                path.display(),
                String::from_utf8_lossy(&out.stderr)
            );
            seen += 1;
        }
    }
    assert!(seen >= 6);
}
