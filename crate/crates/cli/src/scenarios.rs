//! Scenario dispatch. Each scenario is a pure function of its parameters
//! returning checks, a JSON results object and the tables/curves to persist.

use std::sync::Arc;

use fbbm_core::estimates::{
    group_weighted_growth, ratio_report, ucp_residual, CorpusSpec, Lemma, TestCorpus,
};
use fbbm_core::evolution::{run, DiagnosticsSeries};
use fbbm_core::ground_state::{
    petviashvili_solve, qc_residual, solve_qc, translated_shape_error, PetviashviliOptions,
};
use fbbm_core::weighted::{
    l2_dichotomy, stein_asymptotics_with, CutoffSpec, SteinQuadrature, MIN_R_SQUARED,
};
use fbbm_core::{Field, SpectralGrid};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{
    CommutatorParams, EvolveParams, Gaussian, GroundStateParams, GrowthParams, Scenario,
    ScenarioConfig, SteinParams, UcpParams,
};
use crate::manifest::{Check, GridSummary};
use crate::output::{col, slug, Plot, Table};

/// Solitary-wave and oracle tolerances.
pub const RESIDUAL_TOL: f64 = 1e-6;
pub const MASS_DRIFT_TOL: f64 = 1e-8;
pub const LINEAR_L2_DRIFT_TOL: f64 = 1e-12;
pub const SHAPE_ERROR_TOL: f64 = 1e-3;
pub const TAIL_EXPONENT_TOL: f64 = 0.15;
pub const TAIL_R_SQUARED: f64 = 0.995;
pub const STEIN_EXPONENT_TOL: f64 = 0.1;
pub const REFINEMENT_LIMIT: f64 = 2.0;
pub const CONSTANT_RATIO_TOL: f64 = 1e-11;
pub const GROWTH_SLACK: f64 = 0.2;

/// The lemma instances exercised by the commutators scenario.
pub const LEMMAS: [Lemma; 7] = [
    Lemma::CommutatorA { alpha: 0.5 },
    Lemma::Calderon { l: 0, m: 0 },
    Lemma::Calderon { l: 0, m: 1 },
    Lemma::Calderon { l: 1, m: 1 },
    Lemma::Calderon { l: 0, m: 2 },
    Lemma::DAlpha { alpha: 0.25, beta: 0.5 },
    Lemma::DAlpha { alpha: 0.0, beta: 0.5 },
];

#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub grid: Option<GridSummary>,
    pub checks: Vec<Check>,
    pub errors: Vec<String>,
    pub results: Value,
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
}

impl Outcome {
    fn on_grid(n: usize, half_length: f64) -> Self {
        Self {
            grid: Some(GridSummary::new(n, half_length)),
            results: json!({}),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.errors.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// Folds the per-item results of a sweep, keeping successes in order.
    fn absorb(&mut self, items: Vec<(String, fbbm_core::Result<Outcome>)>) -> Vec<Value> {
        let mut entries = Vec::new();
        for (label, item) in items {
            match item {
                Ok(o) => {
                    self.checks.extend(o.checks);
                    self.tables.extend(o.tables);
                    self.plots.extend(o.plots);
                    entries.push(o.results);
                }
                Err(e) => self.errors.push(format!("{label}: {e}")),
            }
        }
        entries
    }
}

pub fn execute(cfg: &ScenarioConfig) -> Outcome {
    match &cfg.scenario {
        Scenario::Evolve(p) => evolve(p),
        Scenario::Groundstate(p) => groundstate(p),
        Scenario::Stein(p) => stein(p),
        Scenario::Commutators(p) => commutators(p, cfg.seed),
        Scenario::WeightedGrowth(p) => growth(p),
        Scenario::Ucp(p) => ucp(p),
    }
}

fn gaussian(grid: &Arc<SpectralGrid>, g: Gaussian) -> fbbm_core::Result<Field> {
    Field::from_fn(grid.clone(), |x| {
        let s = x / g.width;
        g.amplitude * (-s * s).exp()
    })
}

fn curve(name: String, x: (&str, &'static str), y: (&str, &'static str), xs: &[f64], ys: &[f64]) -> (Table, Plot) {
    let table = Table {
        name: name.clone(),
        columns: vec![col(x.0, x.1), col(y.0, y.1)],
        rows: xs.iter().zip(ys).map(|(&a, &b)| vec![a, b]).collect(),
    };
    let plot = Plot {
        name,
        x: col(x.0, x.1),
        y: col(y.0, y.1),
        points: xs.iter().copied().zip(ys.iter().copied()).collect(),
    };
    (table, plot)
}

fn capture(o: &mut Outcome, f: impl FnOnce(&mut Outcome) -> fbbm_core::Result<()>) {
    if let Err(e) = f(o) {
        o.errors.push(e.to_string());
    }
}

fn evolve(p: &EvolveParams) -> Outcome {
    let mut o = Outcome::on_grid(p.n, p.half_length);
    capture(&mut o, |o| {
        let grid = SpectralGrid::new(p.n, p.half_length)?;
        let cfg = p.evolve_config();
        let phi = match p.c {
            Some(c) => solve_qc(p.alpha, c, &grid, &PetviashviliOptions::default())?.1,
            None => gaussian(&grid, p.initial)?,
        };
        let traj = run(&cfg, &phi)?;
        let d = &traj.diagnostics;
        let norm0 = phi.l2_norm();
        let reached = *traj.times.last().unwrap_or(&0.0);
        o.checks.push(Check::ge("final_time_reached", reached, p.final_time * (1.0 - 1e-12)));

        let mass_drift = DiagnosticsSeries::max_drift(&d.mass) / norm0;
        o.checks.push(Check::le("mass_drift_rel", mass_drift, MASS_DRIFT_TOL));
        let l2: Vec<f64> = d.l2_sq.iter().map(|v| v.sqrt()).collect();
        let l2_drift = DiagnosticsSeries::max_drift(&l2) / norm0;
        if !p.nonlinear {
            o.checks.push(Check::le("l2_drift_rel", l2_drift, LINEAR_L2_DRIFT_TOL));
        }

        let mut shape = Value::Null;
        if let Some(c) = p.c {
            if let Some(u) = traj.last_field() {
                let e = translated_shape_error(u, &phi, c * reached)?;
                o.checks.push(Check::le("shape_error_rel", e.relative, SHAPE_ERROR_TOL));
                shape = json!({ "relative": e.relative, "shift": e.shift, "expected_shift": c * reached });
                let xs = u.grid().xs();
                o.tables.push(Table {
                    name: "final_profile".into(),
                    columns: vec![col("x", "length"), col("u_initial", "amplitude"), col("u_final", "amplitude")],
                    rows: xs
                        .iter()
                        .zip(phi.values())
                        .zip(u.values())
                        .map(|((&x, &a), &b)| vec![x, a, b])
                        .collect(),
                });
            }
        }

        let mut columns = vec![
            col("t", "time"),
            col("mass", "amplitude*length"),
            col("energy", "amplitude^2*length"),
            col("hamiltonian", "amplitude^2*length"),
            col("l2_sq", "amplitude^2*length"),
            col("sup", "amplitude"),
            col("power_integral", "amplitude^k*length"),
        ];
        columns.extend(d.weight_exponents.iter().map(|r| col(format!("weighted_r{r}"), "amplitude*length^(r+1/2)")));
        let rows = (0..d.len())
            .map(|i| {
                let mut row = vec![
                    d.times[i],
                    d.mass[i],
                    d.energy[i],
                    d.hamiltonian[i],
                    d.l2_sq[i],
                    d.sup[i],
                    d.power_integral[i],
                ];
                row.extend(d.weighted.iter().map(|w| w[i]));
                row
            })
            .collect();
        o.tables.push(Table {
            name: "diagnostics".into(),
            columns,
            rows,
        });
        for (name, series, unit) in [
            ("energy", &d.energy, "amplitude^2*length"),
            ("hamiltonian", &d.hamiltonian, "amplitude^2*length"),
            ("sup", &d.sup, "amplitude"),
        ] {
            o.plots.push(curve(name.into(), ("t", "time"), (name, unit), &d.times, series).1);
        }

        o.results = json!({
            "termination": serde_json::to_value(&traj.termination).unwrap_or(Value::Null),
            "final_time": reached,
            "records": d.len(),
            "mass_drift_rel": mass_drift,
            "energy_drift": DiagnosticsSeries::max_drift(&d.energy),
            "hamiltonian_drift": DiagnosticsSeries::max_drift(&d.hamiltonian),
            "l2_drift_rel": l2_drift,
            "shape_error": shape,
        });
        Ok(())
    });
    o
}

fn groundstate_one(p: &GroundStateParams, alpha: f64) -> fbbm_core::Result<Outcome> {
    let mut o = Outcome::default();
    let tag = format!("alpha={alpha}");
    let grid = SpectralGrid::new(p.n, p.half_length)?;
    let opts = PetviashviliOptions {
        tol: p.tol,
        max_iter: p.max_iter,
        extension: p.extension,
        initial_guess: None,
    };
    let mut gs = petviashvili_solve(alpha, &grid, &opts)?;
    if let Some(w) = p.window {
        gs = gs.with_tail_fit(w)?;
    }
    o.checks.push(Check::le(format!("{tag}.residual_inf"), gs.residual_inf, RESIDUAL_TOL));

    let mut sech2_error = Value::Null;
    if alpha == 2.0 {
        let err = gs
            .profile
            .grid()
            .xs()
            .iter()
            .zip(gs.profile.values())
            .fold(0.0f64, |m, (&x, &v)| {
                let s = 1.0 / (0.5 * x).cosh();
                m.max((v - 3.0 * s * s).abs())
            });
        o.checks.push(Check::le(format!("{tag}.sech2_error_inf"), err, RESIDUAL_TOL));
        sech2_error = json!(err);
    }
    if let Some(fit) = &gs.tail_fit {
        let expected = 1.0 + alpha;
        o.checks.push(Check::le(
            format!("{tag}.tail_exponent_deviation"),
            (fit.exponent - expected).abs(),
            TAIL_EXPONENT_TOL,
        ));
        o.checks.push(Check::ge(format!("{tag}.tail_r_squared"), fit.r_squared, TAIL_R_SQUARED));
    }
    let xs = grid.xs();
    let (t, pl) = curve(
        slug(&format!("profile_alpha{alpha}")),
        ("x", "length"),
        ("psi", "amplitude"),
        xs,
        gs.profile.values(),
    );
    o.tables.push(t);
    o.plots.push(pl);

    let mut qc = Value::Null;
    if let Some(c) = p.c {
        let qopts = PetviashviliOptions {
            extension: 1,
            ..opts
        };
        let (_, q) = solve_qc(alpha, c, &grid, &qopts)?;
        let res = qc_residual(&q, alpha, c)?;
        o.checks.push(Check::le(format!("{tag}.qc_residual_inf"), res, RESIDUAL_TOL));
        qc = json!({ "c": c, "residual_inf": res });
        let (t, pl) = curve(
            slug(&format!("qc_alpha{alpha}_c{c}")),
            ("x", "length"),
            ("q", "amplitude"),
            xs,
            q.values(),
        );
        o.tables.push(t);
        o.plots.push(pl);
    }

    let mut entry = serde_json::to_value(gs.summary()).unwrap_or(Value::Null);
    entry["sech2_error_inf"] = sech2_error;
    entry["qc"] = qc;
    o.results = entry;
    Ok(o)
}

fn groundstate(p: &GroundStateParams) -> Outcome {
    let mut o = Outcome::on_grid(p.n, p.half_length);
    let items: Vec<_> = p
        .alpha
        .par_iter()
        .map(|&a| (format!("alpha={a}"), groundstate_one(p, a)))
        .collect();
    let entries = o.absorb(items);
    o.results = json!({ "entries": entries });
    o
}

fn stein_one(p: &SteinParams, alpha: f64, theta: f64) -> fbbm_core::Result<Outcome> {
    let mut o = Outcome::default();
    let tag = format!("alpha={alpha},theta={theta}");
    let cutoff = CutoffSpec::default();
    let a = stein_asymptotics_with(
        alpha,
        theta,
        cutoff,
        p.per_decade,
        p.eta_min,
        SteinQuadrature::default(),
    )?;
    o.checks.push(Check::le(
        format!("{tag}.small_exponent_deviation"),
        (a.small.exponent - a.expected_small()).abs(),
        STEIN_EXPONENT_TOL,
    ));
    o.checks.push(Check::ge(format!("{tag}.small_r_squared"), a.small.r_squared, MIN_R_SQUARED));
    o.checks.push(Check::le(
        format!("{tag}.large_exponent_deviation"),
        (a.large.exponent - a.expected_large()).abs(),
        STEIN_EXPONENT_TOL,
    ));
    o.checks.push(Check::ge(format!("{tag}.large_r_squared"), a.large.r_squared, MIN_R_SQUARED));

    let mut dichotomy = Value::Null;
    if let Some(decades) = p.decades {
        let d = l2_dichotomy(alpha, theta, cutoff, decades)?;
        // 𝒟^θ(|ξ|^α ψ) is square integrable near 0 exactly when θ < α + 1/2
        let name = format!("{tag}.l2_tail_ratio");
        o.checks.push(if theta < alpha + 0.5 {
            Check::lt(name, d.tail_ratio, 1.0)
        } else {
            Check::ge(name, d.tail_ratio, 1.0)
        });
        dichotomy = serde_json::to_value(&d).unwrap_or(Value::Null);
    }
    let (t, pl) = curve(
        slug(&format!("stein_alpha{alpha}_theta{theta}")),
        ("eta", "wavenumber"),
        ("stein", "1"),
        &a.etas,
        &a.values,
    );
    o.tables.push(t);
    o.plots.push(pl);
    o.results = json!({
        "alpha": alpha,
        "theta": theta,
        "plateau": a.plateau,
        "p_small": a.small.exponent,
        "r2_small": a.small.r_squared,
        "expected_small": a.expected_small(),
        "p_large": a.large.exponent,
        "r2_large": a.large.r_squared,
        "expected_large": a.expected_large(),
        "dichotomy": dichotomy,
    });
    Ok(o)
}

fn stein(p: &SteinParams) -> Outcome {
    let mut o = Outcome {
        results: json!({}),
        ..Default::default()
    };
    let items: Vec<_> = p
        .alpha
        .par_iter()
        .zip(&p.theta)
        .map(|(&a, &t)| (format!("alpha={a},theta={t}"), stein_one(p, a, t)))
        .collect();
    let entries = o.absorb(items);
    o.results = json!({ "entries": entries });
    o
}

fn commutators(p: &CommutatorParams, seed: u64) -> Outcome {
    let spec = CorpusSpec {
        seed,
        size: p.size,
        ..CorpusSpec::default()
    };
    let mut o = Outcome::on_grid(p.n, spec.half_length);
    capture(&mut o, |o| {
        let corpus = TestCorpus::generate(spec)?;
        let mut entries = Vec::new();
        let mut columns = vec![col("instance", "index")];
        let mut ratio_cols = Vec::new();
        for lemma in LEMMAS {
            let r = match ratio_report(lemma, &corpus, p.n) {
                Ok(r) => r,
                Err(e) => {
                    o.errors.push(format!("{}: {e}", lemma.id()));
                    continue;
                }
            };
            let id = r.id.clone();
            o.checks.push(Check::le(format!("{id}.corpus_max"), r.corpus_max, f64::MAX));
            let f = r.refinement_factor;
            o.checks.push(Check::le(
                format!("{id}.refinement_spread"),
                f.max(1.0 / f),
                REFINEMENT_LIMIT,
            ));
            o.checks.push(Check::le(format!("{id}.constant_ratio"), r.constant_ratio, CONSTANT_RATIO_TOL));
            let idx: Vec<f64> = (0..r.ratios.len()).map(|i| i as f64).collect();
            o.plots.push(curve(slug(&format!("ratios_{id}")), ("instance", "index"), ("ratio", "1"), &idx, &r.ratios).1);
            columns.push(col(slug(&id), "1"));
            ratio_cols.push(r.ratios.clone());
            entries.push(json!({
                "id": id,
                "lemma": r.lemma,
                "corpus_max": r.corpus_max,
                "refined_max": r.refined_max,
                "refinement_factor": r.refinement_factor,
                "constant_ratio": r.constant_ratio,
            }));
        }
        let rows = (0..corpus.len())
            .map(|i| {
                let mut row = vec![i as f64];
                row.extend(ratio_cols.iter().map(|c| c[i]));
                row
            })
            .collect();
        o.tables.push(Table {
            name: "ratios".into(),
            columns,
            rows,
        });
        o.results = json!({
            "seed": seed,
            "corpus_size": corpus.len(),
            "n": p.n,
            "entries": entries,
        });
        Ok(())
    });
    o
}

fn growth_one(p: &GrowthParams, alpha: f64, r: f64) -> fbbm_core::Result<Outcome> {
    let mut o = Outcome::default();
    let grid = SpectralGrid::new(p.n, p.half_length)?;
    let phi = gaussian(&grid, p.initial)?;
    let steps = (p.final_time / p.dt).floor() as usize;
    let times: Vec<f64> = (1..=steps).map(|i| i as f64 * p.dt).collect();
    let g = group_weighted_growth(&phi, alpha, r, &times)?;
    o.checks.push(Check::le(
        format!("alpha={alpha},r={r}.growth_slope"),
        g.slope,
        g.ceiling + GROWTH_SLACK,
    ));
    let (t, pl) = curve(
        slug(&format!("growth_alpha{alpha}_r{r}")),
        ("t", "time"),
        ("norm_ratio", "1"),
        &g.times,
        &g.norm_ratios,
    );
    o.tables.push(t);
    o.plots.push(pl);
    o.results = serde_json::to_value(&g).unwrap_or(Value::Null);
    Ok(o)
}

fn growth(p: &GrowthParams) -> Outcome {
    let mut o = Outcome::on_grid(p.n, p.half_length);
    let items: Vec<_> = p
        .alpha
        .par_iter()
        .zip(&p.r)
        .map(|(&a, &r)| (format!("alpha={a},r={r}"), growth_one(p, a, r)))
        .collect();
    let entries = o.absorb(items);
    o.results = json!({ "entries": entries });
    o
}

fn ucp(p: &UcpParams) -> Outcome {
    let mut o = Outcome::on_grid(p.n, p.half_length);
    capture(&mut o, |o| {
        let grid = SpectralGrid::new(p.n, p.half_length)?;
        let phi = gaussian(&grid, p.initial)?;
        let traj = run(&p.evolve_config(), &phi)?;
        let reached = *traj.times.last().unwrap_or(&0.0);
        o.checks.push(Check::ge("final_time_reached", reached, p.final_time * (1.0 - 1e-12)));
        let rep = ucp_residual(&traj, p.t1, p.t2, p.k)?;
        let m0 = phi.forward().mass();
        if p.initial.amplitude == 0.0 {
            o.checks.push(Check::le("zero_solution_residual_abs", rep.residual.abs(), 0.0));
        } else if p.k % 2 == 0 && m0 > 0.0 {
            // both terms are nonnegative and the mass is conserved
            o.checks.push(Check::gt("initial_mass", m0, 0.0));
            o.checks.push(Check::ge("residual_vs_initial_mass", rep.residual, m0));
        }
        let d = &traj.diagnostics;
        o.tables.push(Table {
            name: "diagnostics".into(),
            columns: vec![
                col("t", "time"),
                col("mass", "amplitude*length"),
                col("power_integral", "amplitude^k*length"),
            ],
            rows: (0..d.len())
                .map(|i| vec![d.times[i], d.mass[i], d.power_integral[i]])
                .collect(),
        });
        o.plots.push(
            curve(
                "power_integral".into(),
                ("t", "time"),
                ("power_integral", "amplitude^k*length"),
                &d.times,
                &d.power_integral,
            )
            .1,
        );
        o.results = json!({
            "t1": rep.t1,
            "t2": rep.t2,
            "power": rep.power,
            "mass_t1": rep.mass_t1,
            "mean_power_integral": rep.mean_power_integral,
            "residual": rep.residual,
            "initial_mass": m0,
            "termination": serde_json::to_value(&traj.termination).unwrap_or(Value::Null),
            "asserted": p.initial.amplitude == 0.0 || (p.k % 2 == 0 && m0 > 0.0),
        });
        Ok(())
    });
    o
}
