//! Experiment execution. Everything is computed before any file is written.

use std::collections::BTreeMap;

use anyhow::{anyhow, bail, Context};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use phenon::analysis::{
    dyadic_radii, extremum_growth_check, fit_growth_exponent, gradient_growth_check, nondegeneracy_check,
    oscillation_profile, resolved_radii, Field, GrowthFit, Ladder, ProfileRow,
};
use phenon::closed_forms::{
    growth_exponent, liouville_threshold, matukuma_constant, nondegeneracy_constant, p_laplacian_residual,
    radial_model_solution, separable_solution, unit_radii, ExponentParams,
};
use phenon::grid::{solve_disc, GridSolution};
use phenon::liouville::{borderline_positivity_probe, liouville_decay_experiment, BorderlineVerdict, DecayVerdict};
use phenon::radial::{
    dead_core_radius, integrate_ivp, seed_positive_branch, solve_bvp, RadialSolution, DEFAULT_SEED_OFFSET,
};
use phenon::{Error, Source2D, WeightSpec};

use crate::config::{Boundary2D, Experiment, ExperimentConfig, Quantity, Solver, SweepKind};

/// Residual bound of the closed-form suite.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Largest relative deviation from an exact profile accepted for a solve.
pub const PROFILE_TOL: f64 = 1e-3;

/// Contents of `result.json`.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub experiment: Experiment,
    pub pass: bool,
    pub checks: BTreeMap<String, bool>,
    pub result: Value,
    pub config: ExperimentConfig,
}

/// Column names and rows of `solution.csv`.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

/// One line of `sweep.csv`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    pub p: f64,
    pub m: f64,
    pub alpha: f64,
    pub k: f64,
    pub theory_exponent: f64,
    pub fitted_exponent: f64,
    pub gap: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub profile: Option<Vec<ProfileRow>>,
    pub solution: Option<Table>,
    pub sweep: Option<Vec<SweepRow>>,
}

struct Draft {
    checks: BTreeMap<String, bool>,
    result: Value,
    profile: Option<Vec<ProfileRow>>,
    solution: Option<Table>,
    sweep: Option<Vec<SweepRow>>,
}

impl Draft {
    fn new(result: Value) -> Self {
        Draft {
            checks: BTreeMap::new(),
            result,
            profile: None,
            solution: None,
            sweep: None,
        }
    }

    fn check(mut self, name: &str, ok: bool) -> Self {
        self.checks.insert(name.to_string(), ok);
        self
    }
}

/// Runs `experiment` on a validated configuration.
pub fn execute(experiment: Experiment, config: &ExperimentConfig) -> anyhow::Result<Outcome> {
    config.validate(experiment)?;
    let draft = match experiment {
        Experiment::ExactCheck => exact_check(config)?,
        Experiment::Shoot => shoot(config)?,
        Experiment::Bvp => bvp(config)?,
        Experiment::Solve2d => solve_2d(config)?,
        Experiment::Fit => fit(config)?,
        Experiment::Nondegeneracy => nondegeneracy(config)?,
        Experiment::Liouville => liouville(config)?,
        Experiment::Borderline => borderline(config)?,
        Experiment::Sweep => sweep(config)?,
    };
    let pass = draft.checks.values().all(|&ok| ok);
    let solution = if config.write_solution { draft.solution } else { None };
    Ok(Outcome {
        report: Report {
            experiment,
            pass,
            checks: draft.checks,
            result: draft.result,
            config: config.clone(),
        },
        profile: draft.profile,
        solution,
        sweep: draft.sweep,
    })
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn exact_check(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let radii = unit_radii();
    let mut cases = Vec::new();
    let (mut worst_residual, mut worst_threshold, mut worst_matukuma) = (0.0f64, 0.0f64, 0.0f64);
    for params in config.sweep.points() {
        let profile = radial_model_solution(&params)?;
        let residual = p_laplacian_residual(&profile, &params, &radii);
        let threshold = if params.k == 0.0 {
            Some(relative(liouville_threshold(&params)?, profile.coefficient))
        } else {
            None
        };
        let c = matukuma_constant(params.n, params.p, profile.exponent, params.k)?;
        let matukuma = (profile.coefficient.powf(params.gap()) * c - 1.0).abs();
        worst_residual = worst_residual.max(residual);
        worst_threshold = worst_threshold.max(threshold.unwrap_or(0.0));
        worst_matukuma = worst_matukuma.max(matukuma);
        cases.push(json!({
            "params": params,
            "coefficient": profile.coefficient,
            "exponent": profile.exponent,
            "residual": residual,
            "threshold_error": threshold,
            "matukuma_error": matukuma,
        }));
    }
    let eps0 = nondegeneracy_constant(2, 2.0, 0.0, 1.0, 1.0, 0.0)?;
    let mut draft = Draft::new(json!({
        "cases": cases,
        "max_residual": worst_residual,
        "max_threshold_error": worst_threshold,
        "max_matukuma_error": worst_matukuma,
        "nondegeneracy_constant_2d_poisson": eps0,
    }))
    .check("residual", worst_residual <= RESIDUAL_TOL)
    .check("liouville_threshold", worst_threshold <= 1e-14)
    .check("matukuma_constant", worst_matukuma <= 1e-12)
    .check("nondegeneracy_constant", eps0 == 0.25);
    if let Ok(profile) = radial_model_solution(&config.problem.params()) {
        draft.profile = Some(
            dyadic_radii(config.radial.r_max, 8)
                .into_iter()
                .map(|r| profile_row(r, profile.value(r)))
                .collect(),
        );
    }
    Ok(draft)
}

fn profile_row(r: f64, value: f64) -> ProfileRow {
    ProfileRow {
        r,
        value,
        log_r: r.ln(),
        log_value: value.ln(),
    }
}

fn radial_table(sol: &RadialSolution) -> Table {
    Table {
        header: vec!["r", "u", "du", "flux"],
        rows: (0..sol.len())
            .map(|i| vec![sol.radii[i], sol.values[i], sol.derivatives[i], sol.fluxes[i]])
            .collect(),
    }
}

fn grid_table(sol: &GridSolution) -> Table {
    Table {
        header: vec!["x", "y", "u"],
        rows: sol.nodes().map(|(x, y, u)| vec![x, y, u]).collect(),
    }
}

/// Ladder clipped to the solution's domain.
fn clipped(ladder: &Ladder, extent: f64, x0: [f64; 2]) -> Ladder {
    let room = extent - x0[0].hypot(x0[1]);
    Ladder {
        r_max: ladder.r_max.min(room),
        ..*ladder
    }
}

/// `params` with `m = 0`: growth away from a positive center value.
fn without_absorption(params: &ExponentParams) -> ExponentParams {
    ExponentParams { m: 0.0, ..*params }
}

fn fit_json(fit: &GrowthFit) -> Value {
    json!({
        "slope": fit.slope,
        "intercept": fit.intercept,
        "constant": fit.constant(),
        "r_squared": fit.r_squared,
        "window": [fit.window.0, fit.window.1],
    })
}

fn shoot(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let spec = config.problem.spec();
    let params = config.problem.params();
    let radial = &config.radial;
    let seeded = radial.seeded && radial.u0 == 0.0 && spec.m() > 0.0;
    let sol = if seeded {
        seed_positive_branch(&spec, DEFAULT_SEED_OFFSET * radial.r_max, radial.r_max, radial.tol)?
    } else {
        integrate_ivp(&spec, radial.u0, radial.r_max, radial.tol)?
    };
    let mut result = json!({
        "center_value": sol.center_value(),
        "boundary_value": sol.boundary_value(),
        "nodes": sol.len(),
        "slope_flux_mismatch": sol.slope_flux_mismatch(),
        "branch": if seeded { "seeded" } else if sol.values.iter().all(|&u| u == 0.0) { "zero" } else { "regular" },
    });
    let mut draft;
    if sol.values.iter().all(|&u| u == 0.0) {
        draft = Draft::new(result);
    } else {
        let theory_params = if seeded { params } else { without_absorption(&params) };
        let ladder = clipped(&config.measure.ladder, sol.r_max(), [0.0, 0.0]);
        let check = extremum_growth_check(&sol, [0.0, 0.0], &theory_params, &ladder)?;
        result["growth"] = json!({
            "fitted_exponent": check.fitted_exponent,
            "theory_exponent": check.theory_exponent,
            "best_constant": check.best_constant,
            "tolerance": check.tolerance,
            "fit": fit_json(&check.fit),
        });
        draft = Draft::new(result).check("growth_exponent", check.pass);
        draft.profile = Some(check.fit.rows());
    }
    draft.solution = Some(radial_table(&sol));
    Ok(draft)
}

/// Dirichlet value used when the config does not give one: the exact
/// profile at `r_max`.
fn default_boundary_value(config: &ExperimentConfig) -> anyhow::Result<f64> {
    if let Some(g) = config.radial.boundary_value {
        return Ok(g);
    }
    let exact = radial_model_solution(&config.problem.params())
        .context("radial.boundary_value is required when the problem has no exact profile")?;
    Ok(exact.value(config.radial.r_max))
}

fn bvp(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let spec = config.problem.spec();
    let params = config.problem.params();
    let radial = &config.radial;
    let g = default_boundary_value(config)?;
    let sol = solve_bvp(&spec, g, radial.r_max, radial.tol)?;
    let miss = (sol.boundary_value() - g).abs();
    let core = dead_core_radius(&sol, 0.0).filter(|&c| c > 0.0);
    let mut result = json!({
        "boundary_value": g,
        "reached": sol.boundary_value(),
        "center_value": sol.center_value(),
        "core_radius": core,
        "shot": sol.shot,
        "nodes": sol.len(),
    });
    let mut draft = Draft::new(Value::Null).check("boundary_value", miss <= (10.0 * radial.tol * g).max(1e-14));

    let exact = radial_model_solution(&params)
        .ok()
        .filter(|e| relative(e.value(radial.r_max), g) <= 1e-12);
    if let Some(exact) = exact {
        let deviation = sol
            .radii
            .iter()
            .zip(&sol.values)
            .filter(|(&r, _)| r > 0.0)
            .map(|(&r, &u)| relative(u, exact.value(r)))
            .fold(0.0, f64::max);
        result["exact_deviation"] = json!(deviation);
        draft = draft.check("exact_profile", deviation <= PROFILE_TOL);
    }
    if core.is_none() && sol.values.iter().any(|&u| u != 0.0) {
        let theory_params = if sol.center_value() > 0.0 {
            without_absorption(&params)
        } else {
            params
        };
        let ladder = clipped(&config.measure.ladder, sol.r_max(), [0.0, 0.0]);
        let check = extremum_growth_check(&sol, [0.0, 0.0], &theory_params, &ladder)?;
        result["growth"] = json!({
            "fitted_exponent": check.fitted_exponent,
            "theory_exponent": check.theory_exponent,
            "best_constant": check.best_constant,
            "tolerance": check.tolerance,
            "fit": fit_json(&check.fit),
        });
        draft = draft.check("growth_exponent", check.pass);
        draft.profile = Some(check.fit.rows());
    }
    draft.result = result;
    draft.solution = Some(radial_table(&sol));
    Ok(draft)
}

type Oracle = Box<dyn Fn(f64, f64) -> f64 + Sync>;

/// Exact solution `(x, y) ↦ u` of the planar problem, when one is known.
fn planar_exact(config: &ExperimentConfig) -> anyhow::Result<Option<Oracle>> {
    let spec = config.planar_spec();
    Ok(match spec.source {
        Source2D::AxisPower { axis, alpha } => {
            let exact = separable_solution(spec.p, alpha, axis)?;
            Some(Box::new(move |x, y| exact.value(&[x, y])))
        }
        Source2D::Radial(source) => {
            let k = spec.coefficient.leading_exponent(spec.p);
            let power_only = matches!(source.weight, WeightSpec::Power { .. })
                && matches!(spec.coefficient, WeightSpec::Power { .. });
            let params = ExponentParams::new(2, spec.p, source.m, source.weight.leading_exponent(spec.p)).with_k(k);
            match radial_model_solution(&params) {
                Ok(exact) if power_only => Some(Box::new(move |x: f64, y: f64| exact.value(x.hypot(y)))),
                _ => None,
            }
        }
        Source2D::Zero => None,
    })
}

struct PlanarRun {
    sol: GridSolution,
    error: Option<f64>,
}

fn planar_solve(config: &ExperimentConfig) -> anyhow::Result<PlanarRun> {
    let spec = config.planar_spec();
    let grid = &config.grid;
    let h = 2.0 / (grid.size - 1) as f64;
    let epsilon = grid.epsilon.epsilon(h);
    let exact = planar_exact(config)?;
    let (sol, oracle): (GridSolution, Option<Oracle>) = match grid.boundary {
        Boundary2D::Exact => {
            let exact =
                exact.ok_or_else(|| anyhow!("no exact solution for this planar problem; use a constant boundary"))?;
            let sol = solve_disc(
                &spec,
                |t: f64| exact(t.cos(), t.sin()),
                grid.size,
                epsilon,
                grid.tol_fp,
                grid.tol_lin,
            )?;
            (sol, Some(exact))
        }
        Boundary2D::Constant { value } => {
            let sol = solve_disc(&spec, |_| value, grid.size, epsilon, grid.tol_fp, grid.tol_lin)?;
            let trivial = matches!(spec.source, Source2D::Zero) || (value == 0.0 && spec.source.m() > 0.0);
            let oracle: Option<Oracle> = if trivial {
                Some(Box::new(move |_, _| value))
            } else {
                None
            };
            (sol, oracle)
        }
    };
    let error = oracle.map(|f| sol.max_error(f));
    Ok(PlanarRun { sol, error })
}

/// Exponent of `u - u(x0) - ∇u(x0)·(x - x0)` at a point where the source is
/// `|x|^alpha` times a nonvanishing factor.
fn oscillation_theory(config: &ExperimentConfig, at_zero: bool) -> anyhow::Result<f64> {
    let params = planar_or_radial_params(config);
    if at_zero && params.m > 0.0 {
        Ok(growth_exponent(&params)?)
    } else {
        Ok(growth_exponent(&without_absorption(&params))?)
    }
}

fn planar_or_radial_params(config: &ExperimentConfig) -> ExponentParams {
    let params = config.problem.params();
    if config.measure.solver == Solver::Radial {
        return params;
    }
    let spec = config.planar_spec();
    let k = spec.coefficient.leading_exponent(spec.p);
    let (m, alpha) = match spec.source {
        Source2D::Radial(s) => (s.m, s.weight.leading_exponent(spec.p)),
        Source2D::AxisPower { alpha, .. } => (0.0, alpha),
        Source2D::Zero => (0.0, 0.0),
    };
    ExponentParams {
        n: 2,
        m,
        alpha,
        k,
        ..params
    }
}

fn solve_2d(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let run = planar_solve(config)?;
    let sol = &run.sol;
    let x0 = config.measure.x0;
    let mut result = json!({
        "size": sol.grid.n,
        "h": sol.h(),
        "epsilon": sol.epsilon,
        "iterations": sol.iterations,
        "linear_iterations": sol.linear_iterations,
        "update_norm": sol.update_norm,
        "max_error": run.error,
    });
    let mut draft = Draft::new(Value::Null).check("converged", sol.update_norm <= sol.tol_fp);
    let ladder = clipped(&config.measure.ladder, sol.extent(), x0);
    let radii = resolved_radii(sol, ladder.r_max, ladder.levels);
    let profile = oscillation_profile(sol, x0, &radii)?;
    match fit_growth_exponent(&profile, None) {
        Ok(fit) => {
            let at_zero = Field::value(sol, x0)?.abs() <= sol.zero_tolerance();
            let theory = oscillation_theory(config, at_zero).ok();
            let tolerance = ladder.tolerance.unwrap_or(sol.exponent_tolerance());
            result["oscillation"] = json!({
                "fitted_exponent": fit.slope,
                "theory_exponent": theory,
                "tolerance": tolerance,
                "fit": fit_json(&fit),
            });
            if let Some(theory) = theory {
                draft = draft.check("oscillation_exponent", (fit.slope - theory).abs() <= tolerance);
            }
            draft.profile = Some(fit.rows());
        }
        Err(Error::DegenerateProfile(msg)) => result["oscillation"] = json!({ "degenerate": msg }),
        Err(e) => return Err(e.into()),
    }
    draft.result = result;
    draft.solution = Some(grid_table(sol));
    Ok(draft)
}

enum Solved {
    Radial(RadialSolution),
    Grid(GridSolution),
}

impl Solved {
    fn field(&self) -> &dyn Field {
        match self {
            Solved::Radial(s) => s,
            Solved::Grid(s) => s,
        }
    }

    fn table(&self) -> Table {
        match self {
            Solved::Radial(s) => radial_table(s),
            Solved::Grid(s) => grid_table(s),
        }
    }
}

fn solve_for_measurement(config: &ExperimentConfig) -> anyhow::Result<Solved> {
    Ok(match config.measure.solver {
        Solver::Radial => {
            let g = default_boundary_value(config)?;
            Solved::Radial(solve_bvp(
                &config.problem.spec(),
                g,
                config.radial.r_max,
                config.radial.tol,
            )?)
        }
        Solver::Grid => Solved::Grid(planar_solve(config)?.sol),
    })
}

fn fit(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let solved = solve_for_measurement(config)?;
    let field = solved.field();
    let x0 = config.measure.x0;
    let ladder = clipped(&config.measure.ladder, field.extent(), x0);
    let at_zero = field.value(x0)?.abs() <= field.zero_tolerance();
    let theory_params = {
        let params = planar_or_radial_params(config);
        if at_zero {
            params
        } else {
            without_absorption(&params)
        }
    };
    let (fitted, theory, tolerance, fit, pass) = match config.measure.quantity {
        Quantity::Oscillation => {
            let radii = resolved_radii(field, ladder.r_max, ladder.levels);
            let fit = fit_growth_exponent(&oscillation_profile(field, x0, &radii)?, None)?;
            let theory = oscillation_theory(config, at_zero)?;
            let tolerance = ladder.tolerance.unwrap_or(field.exponent_tolerance());
            let pass = (fit.slope - theory).abs() <= tolerance;
            (fit.slope, theory, tolerance, fit, pass)
        }
        Quantity::Extremum => {
            let c = extremum_growth_check(field, x0, &theory_params, &ladder)?;
            (c.fitted_exponent, c.theory_exponent, c.tolerance, c.fit, c.pass)
        }
        Quantity::Gradient => {
            let c = gradient_growth_check(field, x0, &theory_params, &ladder)?;
            (c.fitted_exponent, c.theory_exponent, c.tolerance, c.fit, c.pass)
        }
    };
    let mut draft = Draft::new(json!({
        "quantity": config.measure.quantity,
        "x0": x0,
        "fitted_exponent": fitted,
        "theory_exponent": theory,
        "gap": (fitted - theory).abs(),
        "tolerance": tolerance,
        "fit": fit_json(&fit),
    }))
    .check("exponent", pass);
    draft.profile = Some(fit.rows());
    draft.solution = Some(solved.table());
    Ok(draft)
}

fn nondegeneracy(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let solved = solve_for_measurement(config)?;
    let field = solved.field();
    let x0 = config.measure.x0;
    let ladder = clipped(&config.measure.ladder, field.extent(), x0);
    let params = planar_or_radial_params(config);
    let check = nondegeneracy_check(field, x0, &params, &ladder, &config.problem.nondegeneracy())?;
    let rows = check
        .profile
        .iter()
        .filter(|(_, s)| *s > 0.0)
        .map(|&(r, s)| profile_row(r, s))
        .collect();
    let mut draft = Draft::new(json!({
        "x0": x0,
        "measured_constant": check.measured_constant,
        "theory_constant": check.theory_constant,
        "exponent": check.exponent,
        "core_radius": check.core_radius,
    }))
    .check("nondegeneracy", check.pass);
    draft.profile = Some(rows);
    draft.solution = Some(solved.table());
    Ok(draft)
}

fn liouville(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let params = config.problem.params();
    let tau = liouville_threshold(&params)?;
    let g = config.liouville.g_over_tau * tau;
    let report = liouville_decay_experiment(&params, g, &config.liouville.decay)?;
    let mut draft = Draft::new(serde_json::to_value(&report)?);
    if g < tau {
        draft = draft.check("subcritical_decay", report.verdict == DecayVerdict::SubcriticalDecay);
    } else if g == tau {
        let worst = report.rows.iter().filter_map(|r| r.exact_deviation).fold(0.0, f64::max);
        draft = draft.check("exact_profile", worst <= PROFILE_TOL);
    }
    draft.profile = Some(
        report
            .rows
            .iter()
            .filter(|r| !r.probe_values.is_empty())
            .map(|r| profile_row(r.radius, r.probe_values[0]))
            .collect(),
    );
    Ok(draft)
}

fn borderline(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let b = &config.borderline;
    let spec = config.problem.spec();
    let report = borderline_positivity_probe(&spec, b.boundary_value, b.r_max, &b.tolerances)?;
    let finest = b.tolerances.iter().copied().fold(f64::INFINITY, f64::min);
    let sol = solve_bvp(&spec, b.boundary_value, b.r_max, finest)?;
    let mut draft =
        Draft::new(serde_json::to_value(&report)?).check("positivity", report.verdict != BorderlineVerdict::Fail);
    draft.profile = Some(
        dyadic_radii(b.r_max, 8)
            .into_iter()
            .map(|r| profile_row(r, sol.value_at(r)))
            .collect(),
    );
    draft.solution = Some(radial_table(&sol));
    Ok(draft)
}

fn sweep_row(kind: SweepKind, params: &ExponentParams, tolerance: f64, tol: f64) -> (SweepRow, Option<String>) {
    let theory = growth_exponent(params).unwrap_or(f64::NAN);
    let fitted: Result<f64, String> = (|| {
        let exact = radial_model_solution(params).map_err(|e| e.to_string())?;
        match kind {
            SweepKind::Exact => {
                let profile: Vec<(f64, f64)> = dyadic_radii(1.0, 8).into_iter().map(|r| (r, exact.value(r))).collect();
                fit_growth_exponent(&profile, None)
                    .map(|f| f.slope)
                    .map_err(|e| e.to_string())
            }
            SweepKind::Radial => {
                let spec = phenon::ProblemSpec::power(params.n, params.p, params.m, params.alpha, params.k);
                let sol = solve_bvp(&spec, exact.value(1.0), 1.0, tol).map_err(|e| e.to_string())?;
                let ladder = Ladder {
                    r_max: 0.5,
                    levels: 8,
                    tolerance: Some(tolerance),
                };
                extremum_growth_check(&sol, [0.0, 0.0], params, &ladder)
                    .map(|c| c.fitted_exponent)
                    .map_err(|e| e.to_string())
            }
        }
    })();
    let (fitted_exponent, error) = match fitted {
        Ok(v) => (v, None),
        Err(e) => (f64::NAN, Some(e)),
    };
    let gap = (fitted_exponent - theory).abs();
    let row = SweepRow {
        n: params.n,
        p: params.p,
        m: params.m,
        alpha: params.alpha,
        k: params.k,
        theory_exponent: theory,
        fitted_exponent,
        gap,
        pass: gap <= tolerance,
    };
    (row, error)
}

fn sweep(config: &ExperimentConfig) -> anyhow::Result<Draft> {
    let kind = config.sweep.kind;
    let tolerance = config.sweep.tolerance.unwrap_or(match kind {
        SweepKind::Exact => 1e-10,
        SweepKind::Radial => 0.01,
    });
    let tol = config.radial.tol;
    let points = config.sweep.points();
    let results: Vec<(SweepRow, Option<String>)> = points
        .par_iter()
        .map(|params| sweep_row(kind, params, tolerance, tol))
        .collect();
    let failures: Vec<Value> = results
        .iter()
        .filter(|(row, _)| !row.pass)
        .map(|(row, err)| json!({ "row": row, "error": err }))
        .collect();
    let rows: Vec<SweepRow> = results.into_iter().map(|(row, _)| row).collect();
    let max_gap = rows.iter().map(|r| r.gap).fold(0.0, f64::max);
    let mut draft = Draft::new(json!({
        "kind": kind,
        "tolerance": tolerance,
        "rows": rows.len(),
        "max_gap": max_gap,
        "failures": failures,
    }))
    .check("all_rows", failures.is_empty());
    draft.sweep = Some(rows);
    Ok(draft)
}

/// Worker pool for `--jobs`; the global pool when `None`.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    match jobs {
        None => Ok(f()),
        Some(0) => bail!("--jobs must be at least 1"),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
            Ok(pool.install(f))
        }
    }
}
