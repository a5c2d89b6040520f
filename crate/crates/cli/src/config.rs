//! Scenario configuration: TOML in, a validated [`ScenarioConfig`] or the
//! full list of violations out.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use fbbm_core::estimates::CorpusSpec;
use fbbm_core::evolution::EvolveConfig;
use fbbm_core::ground_state::TAIL_EXTENSION;
use fbbm_core::weighted::{PROBES_PER_DECADE, SMALL_WINDOW};
use serde::{Deserialize, Serialize};
use toml::{Spanned, Value};

pub const DEFAULT_SEED: u64 = 20_240_601;

/// Which outputs to write besides the manifest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Emit {
    pub csv: bool,
    pub json: bool,
    pub plotdata: bool,
}

impl Default for Emit {
    fn default() -> Self {
        Self {
            csv: true,
            json: true,
            plotdata: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub seed: u64,
    /// Output directory; the command line and `FBBM_OUT` take over when absent.
    pub out: Option<PathBuf>,
    pub emit: Emit,
    #[serde(flatten)]
    pub scenario: Scenario,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scenario", rename_all = "kebab-case")]
pub enum Scenario {
    Evolve(EvolveParams),
    Groundstate(GroundStateParams),
    Stein(SteinParams),
    Commutators(CommutatorParams),
    WeightedGrowth(GrowthParams),
    Ucp(UcpParams),
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Evolve(_) => "evolve",
            Scenario::Groundstate(_) => "groundstate",
            Scenario::Stein(_) => "stein",
            Scenario::Commutators(_) => "commutators",
            Scenario::WeightedGrowth(_) => "weighted-growth",
            Scenario::Ucp(_) => "ucp",
        }
    }
}

/// Initial data `amplitude·e^{-(x/width)²}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gaussian {
    pub amplitude: f64,
    pub width: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvolveParams {
    pub alpha: f64,
    pub k: u32,
    pub n: usize,
    #[serde(rename = "L")]
    pub half_length: f64,
    pub dt: f64,
    #[serde(rename = "T")]
    pub final_time: f64,
    pub record_every: usize,
    pub nonlinear: bool,
    /// Gaussian data, unless `c` asks for the travelling wave `Q_c`.
    pub initial: Gaussian,
    pub c: Option<f64>,
    /// Weighted-norm exponents recorded along the run.
    pub r: Vec<f64>,
}

impl EvolveParams {
    pub fn evolve_config(&self) -> EvolveConfig {
        EvolveConfig {
            alpha: self.alpha,
            power: self.k,
            dt: self.dt,
            final_time: self.final_time,
            n: self.n,
            half_length: self.half_length,
            record_every: self.record_every,
            nonlinear: self.nonlinear,
            record_fields: self.c.is_some(),
            weight_exponents: self.r.clone(),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GroundStateParams {
    pub alpha: Vec<f64>,
    pub n: usize,
    #[serde(rename = "L")]
    pub half_length: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub extension: usize,
    /// Also build `Q_c` for this speed.
    pub c: Option<f64>,
    /// Tail-fit window `(lo, hi)` in `|x|`.
    pub window: Option<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinParams {
    /// Paired elementwise with `theta`.
    pub alpha: Vec<f64>,
    pub theta: Vec<f64>,
    pub eta_min: f64,
    pub per_decade: usize,
    /// Decades of the L² dichotomy probe; skipped when absent.
    pub decades: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutatorParams {
    pub n: usize,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthParams {
    /// Paired elementwise with `r`.
    pub alpha: Vec<f64>,
    pub r: Vec<f64>,
    pub n: usize,
    #[serde(rename = "L")]
    pub half_length: f64,
    /// Probe spacing; probes sit at `dt, 2dt, …, T`.
    pub dt: f64,
    #[serde(rename = "T")]
    pub final_time: f64,
    pub initial: Gaussian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UcpParams {
    pub alpha: f64,
    pub k: u32,
    pub n: usize,
    #[serde(rename = "L")]
    pub half_length: f64,
    pub dt: f64,
    #[serde(rename = "T")]
    pub final_time: f64,
    pub record_every: usize,
    pub t1: f64,
    pub t2: f64,
    pub initial: Gaussian,
}

impl UcpParams {
    pub fn evolve_config(&self) -> EvolveConfig {
        EvolveConfig {
            alpha: self.alpha,
            power: self.k,
            dt: self.dt,
            final_time: self.final_time,
            n: self.n,
            half_length: self.half_length,
            record_every: self.record_every,
            record_fields: false,
            ..Default::default()
        }
    }
}

/// One problem with a configuration, tied to a key and, when known, a line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub field: String,
    pub message: String,
    pub line: Option<usize>,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConfigError {
    Syntax {
        line: Option<usize>,
        column: Option<usize>,
        message: String,
    },
    Invalid(Vec<Violation>),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::Syntax { line, column, message } => match (line, column) {
                (Some(l), Some(c)) => write!(f, "syntax error at line {l}, column {c}: {message}"),
                _ => write!(f, "syntax error: {message}"),
            },
            ConfigError::Invalid(v) => {
                write!(f, "{} violation(s)", v.len())?;
                for x in v {
                    write!(f, "\n  {x}")?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for ConfigError {}

impl ConfigError {
    pub fn violations(&self) -> &[Violation] {
        match self {
            ConfigError::Invalid(v) => v,
            ConfigError::Syntax { .. } => &[],
        }
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, col)
}

/// Typed access to the top-level keys, recording every problem on the way.
struct Reader {
    entries: BTreeMap<String, (Value, usize)>,
    used: Vec<&'static str>,
    violations: Vec<Violation>,
}

impl Reader {
    fn line(&self, key: &str) -> Option<usize> {
        self.entries.get(key).map(|e| e.1)
    }

    fn flag(&mut self, key: &str, message: impl Into<String>) {
        let line = self.line(key);
        self.violations.push(Violation {
            field: key.to_string(),
            message: message.into(),
            line,
        });
    }

    fn raw(&mut self, key: &'static str) -> Option<Value> {
        self.used.push(key);
        self.entries.get(key).map(|e| e.0.clone())
    }

    fn typed<T>(&mut self, key: &'static str, what: &str, conv: impl Fn(&Value) -> Option<T>) -> Option<T> {
        let v = self.raw(key)?;
        match conv(&v) {
            Some(x) => Some(x),
            None => {
                self.flag(key, format!("expected {what}, got {}", v.type_str()));
                None
            }
        }
    }

    fn float(&mut self, key: &'static str) -> Option<f64> {
        self.typed(key, "a number", as_float)
    }

    fn float_or(&mut self, key: &'static str, default: f64) -> f64 {
        self.float(key).unwrap_or(default)
    }

    fn required_float(&mut self, key: &'static str) -> f64 {
        let present = self.entries.contains_key(key);
        match self.float(key) {
            Some(x) => x,
            None => {
                if !present {
                    self.flag(key, "is required");
                }
                f64::NAN
            }
        }
    }

    fn uint(&mut self, key: &'static str) -> Option<u64> {
        self.typed(key, "a nonnegative integer", |v| {
            v.as_integer().and_then(|i| u64::try_from(i).ok())
        })
    }

    fn uint_or(&mut self, key: &'static str, default: u64) -> u64 {
        self.uint(key).unwrap_or(default)
    }

    fn boolean_or(&mut self, key: &'static str, default: bool) -> bool {
        self.typed(key, "a boolean", Value::as_bool).unwrap_or(default)
    }

    /// A number or a list of numbers.
    fn floats(&mut self, key: &'static str) -> Option<Vec<f64>> {
        self.typed(key, "a number or a list of numbers", |v| match v {
            Value::Array(a) => a.iter().map(as_float).collect(),
            other => as_float(other).map(|x| vec![x]),
        })
    }

    fn required_floats(&mut self, key: &'static str) -> Vec<f64> {
        let present = self.entries.contains_key(key);
        match self.floats(key) {
            Some(v) if v.is_empty() => {
                self.flag(key, "must not be empty");
                v
            }
            Some(v) => v,
            None => {
                if !present {
                    self.flag(key, "is required");
                }
                Vec::new()
            }
        }
    }

    fn pair(&mut self, key: &'static str) -> Option<(f64, f64)> {
        self.typed(key, "a two-element list of numbers", |v| {
            let a = v.as_array()?;
            match a.as_slice() {
                [x, y] => Some((as_float(x)?, as_float(y)?)),
                _ => None,
            }
        })
    }

    fn gaussian(&mut self, amplitude: f64) -> Gaussian {
        Gaussian {
            amplitude: self.float_or("amplitude", amplitude),
            width: self.float_or("width", 1.0),
        }
    }

    fn emit(&mut self) -> Emit {
        let mut emit = Emit::default();
        let Some(v) = self.raw("emit") else {
            return emit;
        };
        let Some(t) = v.as_table() else {
            self.flag("emit", format!("expected a table, got {}", v.type_str()));
            return emit;
        };
        for (k, v) in t {
            let slot = match k.as_str() {
                "csv" => &mut emit.csv,
                "json" => &mut emit.json,
                "plotdata" => &mut emit.plotdata,
                other => {
                    self.flag("emit", format!("unknown key `{other}`"));
                    continue;
                }
            };
            match v.as_bool() {
                Some(b) => *slot = b,
                None => self.flag("emit", format!("`{k}` must be a boolean")),
            }
        }
        emit
    }

    fn unknown_keys(&mut self) {
        let extra: Vec<String> = self
            .entries
            .keys()
            .filter(|k| !self.used.contains(&k.as_str()))
            .cloned()
            .collect();
        for k in extra {
            self.flag(&k, "unknown key");
        }
    }

    fn finish(mut self) -> Vec<Violation> {
        self.unknown_keys();
        self.violations
            .sort_by(|a, b| a.line.cmp(&b.line).then_with(|| a.field.cmp(&b.field)));
        self.violations
    }
}

fn as_float(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

/// Parses and validates a TOML scenario description.
pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigError> {
    let doc: BTreeMap<Spanned<String>, Spanned<Value>> =
        toml::from_str(text).map_err(|e| {
            let (line, column) = match e.span() {
                Some(s) => {
                    let (l, c) = line_col(text, s.start);
                    (Some(l), Some(c))
                }
                None => (None, None),
            };
            ConfigError::Syntax {
                line,
                column,
                message: e.message().trim().to_string(),
            }
        })?;
    let entries = doc
        .into_iter()
        .map(|(k, v)| {
            let line = line_col(text, k.span().start).0;
            (k.into_inner(), (v.into_inner(), line))
        })
        .collect();
    let mut r = Reader {
        entries,
        used: Vec::new(),
        violations: Vec::new(),
    };

    let name = r.typed("scenario", "a string", |v| v.as_str().map(str::to_string));
    let seed = r.uint_or("seed", DEFAULT_SEED);
    let out = r.typed("out", "a path string", |v| v.as_str().map(PathBuf::from));
    let emit = r.emit();

    let scenario = match name.as_deref() {
        Some("evolve") => Some(Scenario::Evolve(evolve(&mut r))),
        Some("groundstate") => Some(Scenario::Groundstate(groundstate(&mut r))),
        Some("stein") => Some(Scenario::Stein(stein(&mut r))),
        Some("commutators") => Some(Scenario::Commutators(commutators(&mut r))),
        Some("weighted-growth") => Some(Scenario::WeightedGrowth(growth(&mut r))),
        Some("ucp") => Some(Scenario::Ucp(ucp(&mut r))),
        Some(other) => {
            r.flag(
                "scenario",
                format!(
                    "unknown scenario `{other}`; expected one of evolve, groundstate, stein, \
                     commutators, weighted-growth, ucp"
                ),
            );
            None
        }
        None => {
            if !r.entries.contains_key("scenario") {
                r.flag("scenario", "is required");
            }
            None
        }
    };
    if scenario.is_none() {
        // keys cannot be judged without a scenario
        r.used.extend(KNOWN_KEYS);
    }
    let violations = r.finish();
    match scenario {
        Some(scenario) if violations.is_empty() => Ok(ScenarioConfig {
            seed,
            out,
            emit,
            scenario,
        }),
        _ => Err(ConfigError::Invalid(violations)),
    }
}

const KNOWN_KEYS: [&str; 26] = [
    "alpha", "k", "n", "L", "dt", "T", "r", "theta", "c", "tol", "t1", "t2", "window",
    "record_every", "nonlinear", "amplitude", "width", "max_iter", "extension", "eta_min",
    "per_decade", "decades", "size", "seed", "out", "emit",
];

fn check_alpha(r: &mut Reader, alpha: f64) {
    if !(alpha > 0.0 && alpha <= 2.0) {
        r.flag("alpha", format!("alpha must lie in (0, 2], got {alpha}"));
    }
}

fn check_grid(r: &mut Reader, n: usize, half_length: f64) {
    if n < 16 || !n.is_power_of_two() {
        r.flag("n", format!("n must be a power of two >= 16, got {n}"));
    }
    if !(half_length > 0.0 && half_length.is_finite()) {
        r.flag("L", format!("L must be positive, got {half_length}"));
    }
}

fn check_gaussian(r: &mut Reader, g: Gaussian) {
    if !g.amplitude.is_finite() {
        r.flag("amplitude", "amplitude must be finite");
    }
    if !(g.width > 0.0 && g.width.is_finite()) {
        r.flag("width", format!("width must be positive, got {}", g.width));
    }
}

fn check_speed(r: &mut Reader, c: Option<f64>) {
    if let Some(c) = c {
        if !(c > 1.0 && c.is_finite()) {
            r.flag("c", format!("c must exceed 1, got {c}"));
        }
    }
}

/// Routes the evolution module's own precondition messages to config keys.
fn evolve_violations(r: &mut Reader, cfg: &EvolveConfig) {
    for v in cfg.violations() {
        let key = if v.starts_with("alpha") {
            "alpha"
        } else if v.starts_with("k ") {
            "k"
        } else if v.starts_with("dt") {
            "dt"
        } else if v.starts_with("T") {
            "T"
        } else if v.starts_with("n ") {
            "n"
        } else if v.starts_with("L ") {
            "L"
        } else if v.starts_with("record_every") {
            "record_every"
        } else if v.starts_with("weight") {
            "r"
        } else {
            "evolve"
        };
        r.flag(key, v);
    }
}

fn evolve(r: &mut Reader) -> EvolveParams {
    let p = EvolveParams {
        alpha: r.required_float("alpha"),
        k: r.uint_or("k", 2) as u32,
        n: r.uint_or("n", 4096) as usize,
        half_length: r.float_or("L", 100.0),
        dt: r.float_or("dt", 5e-3),
        final_time: r.float_or("T", 10.0),
        record_every: r.uint_or("record_every", 20) as usize,
        nonlinear: r.boolean_or("nonlinear", true),
        initial: r.gaussian(2.0),
        c: r.float("c"),
        r: r.floats("r").unwrap_or_default(),
    };
    evolve_violations(r, &p.evolve_config());
    check_gaussian(r, p.initial);
    check_speed(r, p.c);
    if p.c.is_some() {
        if r.entries.contains_key("amplitude") || r.entries.contains_key("width") {
            r.flag("c", "travelling-wave data (c) cannot be combined with amplitude/width");
        }
        if p.k != 2 {
            r.flag("c", "travelling waves are available for k = 2 only");
        }
    }
    p
}

fn groundstate(r: &mut Reader) -> GroundStateParams {
    let window = r.pair("window");
    let p = GroundStateParams {
        alpha: r.required_floats("alpha"),
        n: r.uint_or("n", 2048) as usize,
        half_length: r.float_or("L", 100.0),
        tol: r.float_or("tol", 1e-12),
        max_iter: r.uint_or("max_iter", 5000) as usize,
        extension: r
            .uint_or("extension", if window.is_some() { TAIL_EXTENSION as u64 } else { 1 })
            as usize,
        c: r.float("c"),
        window,
    };
    for &a in &p.alpha {
        check_alpha(r, a);
    }
    check_grid(r, p.n, p.half_length);
    if !(p.tol > 0.0) {
        r.flag("tol", format!("tol must be positive, got {}", p.tol));
    }
    if p.max_iter == 0 {
        r.flag("max_iter", "max_iter must be at least 1");
    }
    if p.extension == 0 {
        r.flag("extension", "extension must be at least 1");
    }
    check_speed(r, p.c);
    if let Some((lo, hi)) = p.window {
        if !(lo > 0.0 && hi > lo) {
            r.flag("window", format!("need 0 < lo < hi, got ({lo}, {hi})"));
        } else if hi > 0.7 * p.half_length {
            r.flag("window", format!("upper end {hi} exceeds 0.7 L = {}", 0.7 * p.half_length));
        }
    }
    p
}

fn stein(r: &mut Reader) -> SteinParams {
    let p = SteinParams {
        alpha: r.required_floats("alpha"),
        theta: r.required_floats("theta"),
        eta_min: r.float_or("eta_min", fbbm_core::weighted::ETA_MIN),
        per_decade: r.uint_or("per_decade", PROBES_PER_DECADE as u64) as usize,
        decades: r.uint("decades").map(|d| d as usize),
    };
    if p.alpha.len() != p.theta.len() {
        r.flag(
            "theta",
            format!(
                "alpha and theta are paired and need equal lengths, got {} and {}",
                p.alpha.len(),
                p.theta.len()
            ),
        );
    }
    for &a in &p.alpha {
        if !(a > 0.0) {
            r.flag("alpha", format!("alpha must be positive, got {a}"));
        }
    }
    for &t in &p.theta {
        if !(t > 0.0 && t < 1.0) {
            r.flag("theta", format!("theta must lie in (0, 1), got {t}"));
        }
    }
    for (a, t) in p.alpha.iter().zip(&p.theta) {
        if a == t {
            r.flag("theta", format!("alpha != theta required for the small-eta fit, got {a}"));
        }
    }
    if !(p.eta_min > 0.0 && p.eta_min <= SMALL_WINDOW.0) {
        r.flag(
            "eta_min",
            format!("eta_min must lie in (0, {}], got {}", SMALL_WINDOW.0, p.eta_min),
        );
    }
    if p.per_decade < 2 {
        r.flag("per_decade", "per_decade must be at least 2");
    }
    if matches!(p.decades, Some(d) if d < 2) {
        r.flag("decades", "decades must be at least 2");
    }
    p
}

fn commutators(r: &mut Reader) -> CommutatorParams {
    let p = CommutatorParams {
        n: r.uint_or("n", 2048) as usize,
        size: r.uint_or("size", CorpusSpec::default().size as u64) as usize,
    };
    // lower third of ξ_max = πn/(2L) must hold the top corpus mode πM/L
    let spec = CorpusSpec::default();
    let min_n = 6 * spec.modes;
    if p.n < 16 || !p.n.is_power_of_two() {
        r.flag("n", format!("n must be a power of two >= 16, got {}", p.n));
    } else if p.n < min_n {
        r.flag("n", format!("n must be at least {min_n} to resolve the corpus, got {}", p.n));
    }
    if p.size == 0 {
        r.flag("size", "size must be at least 1");
    }
    p
}

fn growth(r: &mut Reader) -> GrowthParams {
    let p = GrowthParams {
        alpha: r.required_floats("alpha"),
        r: r.required_floats("r"),
        n: r.uint_or("n", 16384) as usize,
        half_length: r.float_or("L", 400.0),
        dt: r.float_or("dt", 1.0),
        final_time: r.float_or("T", 40.0),
        initial: r.gaussian(1.0),
    };
    if p.alpha.len() != p.r.len() {
        r.flag(
            "r",
            format!(
                "alpha and r are paired and need equal lengths, got {} and {}",
                p.alpha.len(),
                p.r.len()
            ),
        );
    }
    for &a in &p.alpha {
        check_alpha(r, a);
    }
    for (&a, &x) in p.alpha.iter().zip(&p.r) {
        if !(x >= 0.0 && x < 1.5 + a) {
            r.flag("r", format!("r must lie in [0, 3/2 + alpha) = [0, {}), got {x}", 1.5 + a));
        }
    }
    check_grid(r, p.n, p.half_length);
    check_gaussian(r, p.initial);
    if !(p.dt > 0.0) {
        r.flag("dt", "dt must be positive");
    }
    if !(p.final_time > 0.0) {
        r.flag("T", "T must be positive");
    } else if p.dt > 0.0 && p.final_time / p.dt < 2.0 {
        r.flag("T", "need at least two probe times (T >= 2 dt)");
    }
    if p.final_time > 0.0 && EvolveConfig::wrap_safe_half_length(p.final_time) > p.half_length {
        r.flag(
            "T",
            format!(
                "T = {} leaves the wrap-around-safe horizon: L must be at least {}",
                p.final_time,
                EvolveConfig::wrap_safe_half_length(p.final_time)
            ),
        );
    }
    p
}

fn is_record_time(t: f64, step: f64) -> bool {
    let m = t / step;
    (m - m.round()).abs() <= 1e-6 * m.max(1.0)
}

fn ucp(r: &mut Reader) -> UcpParams {
    let p = UcpParams {
        alpha: r.required_float("alpha"),
        k: r.uint_or("k", 2) as u32,
        n: r.uint_or("n", 4096) as usize,
        half_length: r.float_or("L", 100.0),
        dt: r.float_or("dt", 5e-3),
        final_time: r.float_or("T", 5.0),
        record_every: r.uint_or("record_every", 20) as usize,
        t1: r.float_or("t1", 0.0),
        t2: r.required_float("t2"),
        initial: r.gaussian(1.0),
    };
    evolve_violations(r, &p.evolve_config());
    check_gaussian(r, p.initial);
    if !(p.t1 < p.t2) {
        r.flag("t1", format!("t1 < t2 required, got t1={}, t2={}", p.t1, p.t2));
    }
    if p.t1 < 0.0 {
        r.flag("t1", format!("t1 must be nonnegative, got {}", p.t1));
    }
    if p.t2 > p.final_time {
        r.flag("t2", format!("t2 = {} exceeds T = {}", p.t2, p.final_time));
    }
    let step = p.dt * p.record_every as f64;
    if step > 0.0 {
        for (key, t) in [("t1", p.t1), ("t2", p.t2)] {
            if t.is_finite() && !is_record_time(t, step) {
                r.flag(key, format!("{key} = {t} is not a record time (multiple of dt*record_every = {step})"));
            }
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn violations(text: &str) -> Vec<Violation> {
        match parse_config(text) {
            Err(ConfigError::Invalid(v)) => v,
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn groundstate_example_is_valid() {
        let c = parse_config("scenario = 'groundstate'\nalpha = 0.5\nn = 8192\nL = 200\ntol = 1e-12\n")
            .unwrap();
        let Scenario::Groundstate(p) = c.scenario else {
            panic!("wrong scenario")
        };
        assert_eq!(p.alpha, vec![0.5]);
        assert_eq!((p.n, p.half_length, p.tol), (8192, 200.0, 1e-12));
        assert_eq!(c.seed, DEFAULT_SEED);
    }

    #[test]
    fn negative_dt_is_named() {
        let v = violations("scenario = 'evolve'\nalpha = 0.5\ndt = -0.01\n");
        assert!(v.iter().any(|x| x.field == "dt" && x.message == "dt must be positive"));
    }

    #[test]
    fn reversed_ucp_times_are_named() {
        let v = violations("scenario = 'ucp'\nalpha = 0.5\nt1 = 2\nt2 = 1\n");
        assert!(v.iter().any(|x| x.field == "t1" && x.message.starts_with("t1 < t2 required")));
    }

    #[test]
    fn every_violation_is_reported() {
        let v = violations("scenario = 'groundstate'\nalpha = 3\nc = 0.5\nn = 100\nbogus = 1\n");
        let fields: Vec<&str> = v.iter().map(|x| x.field.as_str()).collect();
        for f in ["alpha", "c", "n", "bogus"] {
            assert!(fields.contains(&f), "{f} missing from {fields:?}");
        }
        let bogus = v.iter().find(|x| x.field == "bogus").unwrap();
        assert_eq!(bogus.line, Some(5));
    }

    #[test]
    fn keys_of_other_scenarios_are_unknown() {
        let v = violations("scenario = 'stein'\nalpha = 0.5\ntheta = 0.25\ndt = 0.1\n");
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].field, "dt");
        assert_eq!(v[0].message, "unknown key");
    }

    #[test]
    fn syntax_errors_carry_a_line() {
        match parse_config("scenario = 'stein'\nalpha = [0.5,\n") {
            Err(ConfigError::Syntax { line, .. }) => assert!(line.is_some()),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_types_are_reported() {
        let v = violations("scenario = 'evolve'\nalpha = 'half'\nnonlinear = 3\n");
        assert!(v.iter().any(|x| x.field == "alpha" && x.message.contains("a number")));
        assert!(v.iter().any(|x| x.field == "nonlinear" && x.message.contains("boolean")));
    }

    #[test]
    fn stein_pairs_must_match() {
        let v = violations("scenario = 'stein'\nalpha = [0.5, 0.75]\ntheta = [0.25]\n");
        assert!(v.iter().any(|x| x.field == "theta" && x.message.contains("equal lengths")));
    }

    #[test]
    fn ucp_times_must_be_record_times() {
        let v = violations("scenario = 'ucp'\nalpha = 0.5\nt2 = 1.01\n");
        assert!(v.iter().any(|x| x.field == "t2" && x.message.contains("record time")));
    }

    #[test]
    fn emit_flags_are_read() {
        let c = parse_config("scenario = 'commutators'\n[emit]\ncsv = false\n").unwrap();
        assert_eq!(
            c.emit,
            Emit {
                csv: false,
                json: true,
                plotdata: true
            }
        );
        let v = violations("scenario = 'commutators'\n[emit]\npng = true\n");
        assert_eq!(v[0].field, "emit");
    }

    #[test]
    fn growth_horizon_is_enforced() {
        let v = violations("scenario = 'weighted-growth'\nalpha = 0.5\nr = 1\nL = 50\nT = 40\n");
        assert!(v.iter().any(|x| x.field == "T" && x.message.contains("wrap-around")));
    }
}
