//! Command-line front end: run configuration, task dispatch and result
//! emission.
//!
//! Exit statuses: 0 when every audit passes, 1 on an audit failure, 2 on a
//! parse error, 3 on a validation error and 4 on a numerical failure. Every
//! failure is reported as a JSON error record on stdout.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};
use serde_json::{json, Value};

use crate::eos::{FluidState, GasModel};
use crate::error::Error;
use crate::fv_solver::{self, Boundary, FvOptions, Grid1D};
use crate::lagrangian_maps::{self, FlowMap1D};
use crate::rh::{self, Admissibility, HugoniotSolver, ShockJump};
use crate::shock1d::{self, PiecewiseShockSolution, SolutionSpec};
use crate::weakcheck::{self, Component, SpacetimeQuadrature, TestFunction};

pub const EXIT_OK: i32 = 0;
pub const EXIT_AUDIT_FAILURE: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

/// Environment variable holding the `env_logger` filter.
pub const LOG_ENV: &str = "SHOCKVAR_LOG";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn status(&self) -> i32 {
        match self {
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Validation(_) | CliError::Io(_) => EXIT_VALIDATION,
            CliError::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Validation(_) => "validation",
            CliError::Numerical(_) => "numerical",
            CliError::Io(_) => "io",
        }
    }

    fn record(&self) -> Value {
        json!({ "status": self.status(), "error": { "kind": self.kind(), "message": self.to_string() } })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            CliError::Numerical(e.to_string())
        } else {
            CliError::Validation(e.to_string())
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

// ---------------------------------------------------------------------------
// configuration

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<GasModel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solution: Option<SolutionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<Task>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Task {
    RhSolve(RhSolveTask),
    ShockExample(ShockExampleTask),
    EnergyAudit(EnergyAuditTask),
    FvRun(FvRunTask),
    WeakVerify(WeakVerifyTask),
}

impl Task {
    pub fn name(&self) -> &'static str {
        match self {
            Task::RhSolve(_) => "rh-solve",
            Task::ShockExample(_) => "shock-example",
            Task::EnergyAudit(_) => "energy-audit",
            Task::FvRun(_) => "fv-run",
            Task::WeakVerify(_) => "weak-verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RhSolveTask {
    pub left: FluidState,
    pub rho_right: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockExampleTask {
    pub gamma: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyAuditTask {
    /// Time at which the energy budget is evaluated.
    #[serde(default)]
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FvRunTask {
    pub cells: usize,
    pub t_final: f64,
    #[serde(default = "default_cfl")]
    pub cfl: f64,
    #[serde(default)]
    pub boundary: Boundary,
    #[serde(default = "default_snapshots")]
    pub snapshots: usize,
}

fn default_cfl() -> f64 {
    0.9
}

fn default_snapshots() -> usize {
    10
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeakVerifyTask {
    /// Explicit bumps; a seeded battery is generated when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bumps: Option<Vec<TestFunction>>,
    #[serde(default = "default_battery_size")]
    pub battery_size: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub quadrature: SpacetimeQuadrature,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<Component>>,
}

fn default_battery_size() -> usize {
    20
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub residual: f64,
    pub admissibility: f64,
    pub weak: f64,
    pub fv_residual: f64,
    pub conservation: f64,
    pub shock_offset_cells: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: rh::RESIDUAL_TOLERANCE,
            admissibility: rh::ADMISSIBILITY_TOLERANCE,
            weak: 1e-8,
            fv_residual: 5e-3,
            conservation: 1e-10,
            shock_offset_cells: 2.0,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> CliResult<()> {
        let all = [
            ("residual", self.residual),
            ("admissibility", self.admissibility),
            ("weak", self.weak),
            ("fv_residual", self.fv_residual),
            ("conservation", self.conservation),
            ("shock_offset_cells", self.shock_offset_cells),
        ];
        for (name, v) in all {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Validation(format!("tolerance `{name}` must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: None, formats: vec![Format::Json] }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn to_toml(&self) -> CliResult<String> {
        toml::to_string(self).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn validate(&self) -> CliResult<()> {
        let task = self.task.as_ref().ok_or_else(|| CliError::Validation("missing task block".into()))?;
        self.tolerances.validate()?;
        if let Some(model) = &self.model {
            model.validate()?;
        }
        let needs_model = !matches!(task, Task::ShockExample(_));
        let needs_solution = matches!(task, Task::EnergyAudit(_) | Task::FvRun(_) | Task::WeakVerify(_));
        if needs_model && self.model.is_none() {
            return Err(CliError::Validation(format!("task `{}` needs a model block", task.name())));
        }
        if needs_solution && self.solution.is_none() {
            return Err(CliError::Validation(format!("task `{}` needs a solution block", task.name())));
        }
        Ok(())
    }

    fn solution(&self) -> CliResult<PiecewiseShockSolution> {
        let model = self.model.ok_or_else(|| CliError::Validation("missing model block".into()))?;
        let spec = self.solution.as_ref().ok_or_else(|| CliError::Validation("missing solution block".into()))?;
        Ok(PiecewiseShockSolution::from_spec(model, spec)?)
    }
}

// ---------------------------------------------------------------------------
// results

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Audit {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Audit {
    /// Passes when `value <= tolerance`.
    fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Audit { name: name.into(), value, tolerance, pass: value <= tolerance }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub task: &'static str,
    pub status: i32,
    pub passed: bool,
    pub audits: Vec<Audit>,
    pub result: Value,
}

/// A file produced by a task, written relative to the output directory.
#[derive(Debug, Clone)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub summary: Summary,
    pub artifacts: Vec<Artifact>,
}

impl Outcome {
    fn new(task: &'static str, audits: Vec<Audit>, result: Value, artifacts: Vec<Artifact>) -> Self {
        let passed = audits.iter().all(|a| a.pass);
        let status = if passed { EXIT_OK } else { EXIT_AUDIT_FAILURE };
        Outcome { summary: Summary { task, status, passed, audits, result }, artifacts }
    }
}

/// Pretty JSON with every float written in scientific notation with 17
/// significant digits. Non-finite floats become `null`.
struct FixedFloat<'a>(PrettyFormatter<'a>);

impl Formatter for FixedFloat<'_> {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, value: f32) -> io::Result<()> {
        write!(w, "{:.16e}", value as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloat(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("in-memory JSON serialization");
    buf.push(b'\n');
    String::from_utf8(buf).expect("JSON is UTF-8")
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_string<F>(header: &[&str], fill: F) -> CliResult<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(header).map_err(io)?;
    fill(&mut w).map_err(io)?;
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV is UTF-8"))
}

/// `(quantity, value)` rows for every numeric or boolean leaf of `value`.
pub fn summary_csv(summary: &Summary) -> CliResult<String> {
    let mut rows = Vec::new();
    flatten("", &summary.result, &mut rows);
    for a in &summary.audits {
        rows.push((format!("audit.{}.value", a.name), fmt_f64(a.value)));
        rows.push((format!("audit.{}.pass", a.name), a.pass.to_string()));
    }
    csv_string(&["quantity", "value"], |w| {
        for (q, v) in &rows {
            w.write_record([q.as_str(), v.as_str()])?;
        }
        Ok(())
    })
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(&key(k), v, rows)),
        Value::Array(items) => items.iter().enumerate().for_each(|(i, v)| flatten(&key(&i.to_string()), v, rows)),
        Value::Number(n) => rows.push((
            prefix.to_string(),
            if n.is_f64() { fmt_f64(n.as_f64().unwrap_or(f64::NAN)) } else { n.to_string() },
        )),
        Value::Bool(b) => rows.push((prefix.to_string(), b.to_string())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        Value::String(_) => {}
    }
}

// ---------------------------------------------------------------------------
// tasks

/// Executes the configured task without touching the filesystem.
pub fn run(config: &RunConfig) -> CliResult<Outcome> {
    config.validate()?;
    let task = config.task.as_ref().expect("validated");
    log::info!("running task {}", task.name());
    let mut outcome = match task {
        Task::RhSolve(t) => rh_solve(config, t)?,
        Task::ShockExample(t) => shock_example(config, t)?,
        Task::EnergyAudit(t) => energy_audit(config, t)?,
        Task::FvRun(t) => fv_run(config, t)?,
        Task::WeakVerify(t) => weak_verify(config, t)?,
    };
    outcome.artifacts.push(Artifact { name: "run_config.toml".into(), contents: config.to_toml()? });
    Ok(outcome)
}

fn rh_solve(config: &RunConfig, task: &RhSolveTask) -> CliResult<Outcome> {
    let model = config.model.expect("validated");
    let tol = &config.tolerances;
    let solver = HugoniotSolver { tolerance: tol.residual, ..HugoniotSolver::default() };
    let (admissible, other, jump) = if model.is_barotropic() {
        let b = solver.barotropic_branches(&task.left, task.rho_right, &model)?;
        let right = FluidState::barotropic(task.rho_right, b.admissible.u_right);
        let jump = ShockJump::new(task.left, right, 1.0, b.admissible.speed)?;
        (
            json!({ "u_right": b.admissible.u_right, "v_s": b.admissible.speed }),
            json!({ "u_right": b.other.u_right, "v_s": b.other.speed }),
            jump,
        )
    } else {
        let b = solver.full_branches(&task.left, task.rho_right, &model)?;
        let a = b.admissible;
        let right = FluidState::with_entropy(task.rho_right, a.u_right, a.s_right);
        let jump = ShockJump::new(task.left, right, 1.0, a.speed)?;
        (
            json!({ "u_right": a.u_right, "s_right": a.s_right, "v_s": a.speed }),
            json!({ "u_right": b.other.u_right, "s_right": b.other.s_right, "v_s": b.other.speed }),
            jump,
        )
    };
    let residuals = rh::rh_residuals(&jump, &model)?;
    let admissibility = Admissibility { tolerance: tol.admissibility, ..Admissibility::default() };
    let admissible_ok = admissibility.check(&jump, &model)?;
    let audits = vec![
        Audit::at_most("rh_residual", residuals.max_abs_conserved(&model), tol.residual),
        Audit { name: "admissible".into(), value: admissible_ok as u8 as f64, tolerance: 1.0, pass: admissible_ok },
    ];
    let result = json!({
        "model": model,
        "left": task.left,
        "rho_right": task.rho_right,
        "u_right": admissible["u_right"],
        "v_s": admissible["v_s"],
        "admissible": admissible,
        "other": other,
        "residuals": residuals,
    });
    Ok(Outcome::new("rh-solve", audits, result, Vec::new()))
}

fn calibrated_lambda(sol: &PiecewiseShockSolution) -> CliResult<Option<(f64, f64)>> {
    if sol.shock_count() != 1 {
        return Ok(None);
    }
    match lagrangian_maps::calibrate_lambda(sol) {
        Ok(l) => Ok(Some(l)),
        // no mass crosses the shock and any constant pair works
        Err(Error::GaugeOnly(_)) => Ok(Some((0.0, 0.0))),
        Err(e) => Err(e.into()),
    }
}

fn energy_summary(sol: &PiecewiseShockSolution, time: f64) -> CliResult<(Value, Option<f64>)> {
    let mismatch = shock1d::volume_potential_mismatch(sol)?;
    let budget = shock1d::energy_budget(sol, time)?;
    let lambda = calibrated_lambda(sol)?;
    let augmented = match lambda {
        Some((l, r)) => {
            let map = FlowMap1D::new(
                sol,
                vec![lagrangian_maps::ReferenceDensity::Constant(l), lagrangian_maps::ReferenceDensity::Constant(r)],
            )?;
            Some(lagrangian_maps::augmented_energy_rate(sol, &map, time)?)
        }
        None => None,
    };
    let value = json!({
        "dEdt": mismatch.de_dt,
        "neg_dVdt_volume": mismatch.neg_dv_dt,
        "gap": mismatch.gap,
        "lambda_calibrated": lambda.map(|(l, r)| vec![l, r]),
        "augmented_rate": augmented,
        "energy_budget": { "interface": budget.interface, "boundary": budget.boundary, "total": budget.total() },
        "length_rate": shock1d::length_rate(sol),
    });
    Ok((value, augmented))
}

fn solution_audits(sol: &PiecewiseShockSolution, tol: &Tolerances) -> CliResult<Vec<Audit>> {
    let model = sol.model();
    let mut worst = 0.0_f64;
    for i in 0..sol.shock_count() {
        worst = worst.max(rh::rh_residuals(&sol.jump(i), model)?.max_abs_conserved(model));
    }
    let rate = shock1d::energy_rate(sol)?;
    Ok(vec![
        Audit::at_most("rh_residual", worst, tol.residual),
        Audit::at_most("energy_dissipative", rate, tol.admissibility),
    ])
}

fn shock_example(config: &RunConfig, task: &ShockExampleTask) -> CliResult<Outcome> {
    let sol = PiecewiseShockSolution::stationary_example(task.gamma)?;
    let gamma = task.gamma;
    let GasModel::BarotropicPolytropic { k, .. } = *sol.model() else {
        unreachable!("the example is barotropic")
    };
    let (energy, _) = energy_summary(&sol, 0.0)?;
    let residuals = rh::rh_residuals(&sol.jump(0), sol.model())?;
    let closed_form = -3.0 + 2.0 * gamma / (gamma - 1.0) - 2.0 * gamma / ((gamma - 1.0) * (2f64.powf(gamma) - 1.0));
    let mut result = json!({
        "gamma": gamma,
        "K": k,
        "left": sol.states()[0],
        "right": sol.states()[1],
        "v_s": sol.shock_speeds()[0],
        "residuals": residuals,
        "dEdt_closed_form": closed_form,
    });
    merge(&mut result, energy);
    let audits = solution_audits(&sol, &config.tolerances)?;
    Ok(Outcome::new("shock-example", audits, result, Vec::new()))
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn energy_audit(config: &RunConfig, task: &EnergyAuditTask) -> CliResult<Outcome> {
    let sol = config.solution()?;
    let (result, augmented) = energy_summary(&sol, task.time)?;
    let mut audits = solution_audits(&sol, &config.tolerances)?;
    if let Some(rate) = augmented {
        audits.push(Audit::at_most("augmented_rate", rate.abs(), config.tolerances.residual));
    }
    Ok(Outcome::new("energy-audit", audits, result, Vec::new()))
}

fn fv_run(config: &RunConfig, task: &FvRunTask) -> CliResult<Outcome> {
    let sol = config.solution()?;
    let model = *sol.model();
    let tol = &config.tolerances;
    let domain = sol.domain();
    if domain.is_free() {
        return Err(CliError::Validation("the finite-volume run needs a fixed domain".into()));
    }
    let grid = Grid1D::new(domain.x_left, domain.x_right, task.cells)?;
    let options = FvOptions {
        cfl: task.cfl,
        t_final: task.t_final,
        boundary: task.boundary,
        snapshots: task.snapshots.max(2),
        ..FvOptions::default()
    };
    let run = fv_solver::run(&model, &grid, fv_solver::project(&sol, &grid, 0.0)?, &options)?;
    let with_entropy = !model.is_barotropic();
    let mut header = vec!["t", "x", "rho", "u"];
    if with_entropy {
        header.push("s");
    }
    let snapshots = csv_string(&header, |w| {
        for (t, field) in &run.snapshots {
            for (i, u) in field.iter().enumerate() {
                let state = fv_solver::primitive(&model, u)
                    .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e.to_string()))?;
                let mut row = vec![fmt_f64(*t), fmt_f64(grid.center(i)), fmt_f64(state.rho), fmt_f64(state.u)];
                if with_entropy {
                    row.push(fmt_f64(state.s.unwrap_or(f64::NAN)));
                }
                w.write_record(&row)?;
            }
        }
        Ok(())
    })?;

    let mut audits = vec![Audit::at_most("conservation_drift", run.conservation_drift, tol.conservation)];
    let mut result = json!({
        "cells": task.cells,
        "dx": grid.dx(),
        "t_final": run.final_time(),
        "steps": run.steps,
        "conservation_drift": run.conservation_drift,
        "density_l1_error": fv_solver::density_l1_error(&sol, &grid, run.final_field(), run.final_time())?,
    });
    if sol.shock_count() == 1 {
        let measured = fv_solver::measure_shock(&model, &run, 0.5 * task.t_final)?;
        let series: Vec<[f64; 2]> = run
            .snapshots
            .iter()
            .filter_map(|(t, f)| fv_solver::locate_shock(&model, &grid, f).ok().map(|e| [*t, e.position]))
            .collect();
        let exact = sol.shock_position(0, run.final_time());
        let offset = (measured.positions.last().copied().unwrap_or(f64::NAN) - exact).abs() / grid.dx();
        let norm = measured.residuals.norm_for(&model);
        audits.push(Audit::at_most("measured_residual_norm", norm, tol.fv_residual));
        audits.push(Audit::at_most("shock_offset_cells", offset, tol.shock_offset_cells));
        merge(
            &mut result,
            json!({
                "shock_position_series": series,
                "measured_speed": measured.speed,
                "exact_speed": sol.shock_speeds()[0],
                "measured_left": measured.jump.left,
                "measured_right": measured.jump.right,
                "measured_residuals": measured.residuals,
                "measured_residual_norm": norm,
                "shock_offset_cells": offset,
            }),
        );
    }
    Ok(Outcome::new(
        "fv-run",
        audits,
        result,
        vec![Artifact { name: "fv_snapshots.csv".into(), contents: snapshots }],
    ))
}

fn weak_verify(config: &RunConfig, task: &WeakVerifyTask) -> CliResult<Outcome> {
    let sol = config.solution()?;
    let bumps = match &task.bumps {
        Some(b) => b.clone(),
        None => weakcheck::standard_battery(&sol, task.seed, task.battery_size)?,
    };
    let components = task.components.clone().unwrap_or_else(|| {
        if sol.model().is_barotropic() {
            vec![Component::Mass, Component::Momentum]
        } else {
            Component::ALL.to_vec()
        }
    });
    let mut rows = Vec::new();
    let mut worst = 0.0_f64;
    for (i, h) in bumps.iter().enumerate() {
        for &c in &components {
            let r = weakcheck::weak_residual(&sol, c, h, &task.quadrature)?;
            worst = worst.max(r.abs());
            rows.push((i, *h, c, r));
        }
    }
    let table = csv_string(&["bump", "t0", "x0", "r_t", "r_x", "component", "residual"], |w| {
        for (i, h, c, r) in &rows {
            let name = serde_json::to_value(c).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
            w.write_record([
                i.to_string(),
                fmt_f64(h.center.0),
                fmt_f64(h.center.1),
                fmt_f64(h.radii.0),
                fmt_f64(h.radii.1),
                name,
                fmt_f64(*r),
            ])?;
        }
        Ok(())
    })?;
    let audits = vec![Audit::at_most("max_weak_residual", worst, config.tolerances.weak)];
    let result = json!({
        "bumps": bumps.len(),
        "seed": task.seed,
        "components": components,
        "max_abs_residual": worst,
    });
    Ok(Outcome::new(
        "weak-verify",
        audits,
        result,
        vec![Artifact { name: "weak_residuals.csv".into(), contents: table }],
    ))
}

// ---------------------------------------------------------------------------
// command line

#[derive(Debug, Parser)]
#[command(name = "shockvar", version, about = "Exact shock solutions, jump audits and weak-form checks")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory receiving the summary and data files.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Output formats in addition to the JSON on stdout.
    #[arg(long, global = true, value_delimiter = ',')]
    pub format: Vec<Format>,
    /// Seed for randomized test-function batteries.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Hugoniot conditions for the right state.
    RhSolve(RhSolveArgs),
    /// Reconstruct the stationary-shock example and its energy figures.
    ShockExample(GammaArgs),
    /// Energy, volume-potential and calibrated-lambda balance.
    EnergyAudit(GammaArgs),
    /// Finite-volume capture of the example shock.
    FvRun(FvRunArgs),
    /// Weak-form residuals against a bump battery.
    WeakVerify(WeakVerifyArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::RhSolve(_) => "rh-solve",
            Command::ShockExample(_) => "shock-example",
            Command::EnergyAudit(_) => "energy-audit",
            Command::FvRun(_) => "fv-run",
            Command::WeakVerify(_) => "weak-verify",
        }
    }

    fn has_flags(&self) -> bool {
        match self {
            Command::RhSolve(a) => {
                a.rho_left.is_some()
                    || a.u_left.is_some()
                    || a.s_left.is_some()
                    || a.rho_right.is_some()
                    || a.gamma.is_some()
                    || a.k.is_some()
                    || a.ideal_gas
                    || a.e_ref.is_some()
                    || a.c_v.is_some()
            }
            Command::ShockExample(a) | Command::EnergyAudit(a) => a.gamma.is_some(),
            Command::FvRun(a) => {
                a.gamma.is_some() || a.cells.is_some() || a.t_final.is_some() || a.cfl.is_some() || a.boundary.is_some()
            }
            Command::WeakVerify(a) => a.gamma.is_some() || a.bumps.is_some(),
        }
    }
}

#[derive(Debug, Args)]
pub struct RhSolveArgs {
    /// Left density.
    #[arg(long)]
    pub rho_left: Option<f64>,
    /// Left velocity.
    #[arg(long, allow_hyphen_values = true)]
    pub u_left: Option<f64>,
    /// Entropy density of the left state (ideal gas).
    #[arg(long, allow_hyphen_values = true)]
    pub s_left: Option<f64>,
    /// Prescribed right density.
    #[arg(long)]
    pub rho_right: Option<f64>,
    /// Adiabatic exponent [default: 1.4].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Polytropic constant [default: 1].
    #[arg(long)]
    pub k: Option<f64>,
    /// Use the ideal gas with entropy instead of the polytrope.
    #[arg(long)]
    pub ideal_gas: bool,
    /// Reference specific energy of the ideal gas [default: 1].
    #[arg(long)]
    pub e_ref: Option<f64>,
    /// Specific heat at constant volume [default: 1].
    #[arg(long)]
    pub c_v: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GammaArgs {
    /// Adiabatic exponent of the example [default: 2].
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct FvRunArgs {
    /// Adiabatic exponent of the example [default: 2].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Number of cells [default: 200].
    #[arg(long)]
    pub cells: Option<usize>,
    /// End time [default: 0.5].
    #[arg(long)]
    pub t_final: Option<f64>,
    /// Courant number [default: 0.9].
    #[arg(long)]
    pub cfl: Option<f64>,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BoundaryArg {
    Outflow,
    Periodic,
}

#[derive(Debug, Args)]
pub struct WeakVerifyArgs {
    /// Adiabatic exponent of the example [default: 2].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Size of the generated bump battery.
    #[arg(long)]
    pub bumps: Option<usize>,
}

const DEFAULT_GAMMA: f64 = 2.0;

fn example_config(gamma: Option<f64>) -> CliResult<RunConfig> {
    let sol = PiecewiseShockSolution::stationary_example(gamma.unwrap_or(DEFAULT_GAMMA))?;
    Ok(RunConfig { model: Some(*sol.model()), solution: Some(sol.spec()), ..RunConfig::default() })
}

fn config_from_command(command: &Command) -> CliResult<RunConfig> {
    let missing = |flag: &str| CliError::Validation(format!("missing --{flag}"));
    Ok(match command {
        Command::RhSolve(a) => {
            let gamma = a.gamma.unwrap_or(1.4);
            let model = if a.ideal_gas {
                GasModel::ideal_gas(gamma, a.e_ref.unwrap_or(1.0), a.c_v.unwrap_or(1.0))?
            } else {
                GasModel::barotropic(a.k.unwrap_or(1.0), gamma)?
            };
            let left = FluidState {
                rho: a.rho_left.ok_or_else(|| missing("rho-left"))?,
                u: a.u_left.ok_or_else(|| missing("u-left"))?,
                s: a.s_left,
            };
            let task = RhSolveTask { left, rho_right: a.rho_right.ok_or_else(|| missing("rho-right"))? };
            RunConfig { model: Some(model), task: Some(Task::RhSolve(task)), ..RunConfig::default() }
        }
        Command::ShockExample(a) => RunConfig {
            task: Some(Task::ShockExample(ShockExampleTask { gamma: a.gamma.unwrap_or(DEFAULT_GAMMA) })),
            ..RunConfig::default()
        },
        Command::EnergyAudit(a) => {
            RunConfig { task: Some(Task::EnergyAudit(EnergyAuditTask::default())), ..example_config(a.gamma)? }
        }
        Command::FvRun(a) => RunConfig {
            task: Some(Task::FvRun(FvRunTask {
                cells: a.cells.unwrap_or(200),
                t_final: a.t_final.unwrap_or(0.5),
                cfl: a.cfl.unwrap_or_else(default_cfl),
                boundary: match a.boundary {
                    Some(BoundaryArg::Periodic) => Boundary::Periodic,
                    _ => Boundary::Outflow,
                },
                snapshots: default_snapshots(),
            })),
            ..example_config(a.gamma)?
        },
        Command::WeakVerify(a) => RunConfig {
            task: Some(Task::WeakVerify(WeakVerifyTask {
                bumps: None,
                battery_size: a.bumps.unwrap_or_else(default_battery_size),
                seed: 0,
                quadrature: SpacetimeQuadrature::default(),
                components: None,
            })),
            ..example_config(a.gamma)?
        },
    })
}

/// Effective configuration from the parsed command line.
pub fn resolve_config(cli: &Cli) -> CliResult<RunConfig> {
    let mut config = match (&cli.config, &cli.command) {
        (Some(path), command) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
            let config = RunConfig::from_toml(&text)?;
            if let Some(command) = command {
                if command.has_flags() {
                    return Err(CliError::Validation("task flags cannot be combined with --config".into()));
                }
                let configured = config.task.as_ref().map(Task::name);
                if configured != Some(command.name()) {
                    return Err(CliError::Validation(format!(
                        "subcommand `{}` does not match the configured task {:?}",
                        command.name(),
                        configured
                    )));
                }
            }
            config
        }
        (None, Some(command)) => config_from_command(command)?,
        (None, None) => return Err(CliError::Validation("give a subcommand or --config".into())),
    };
    if let Some(dir) = &cli.out_dir {
        config.output.dir = Some(dir.clone());
    }
    if !cli.format.is_empty() {
        config.output.formats = cli.format.clone();
    }
    if let (Some(seed), Some(Task::WeakVerify(task))) = (cli.seed, config.task.as_mut()) {
        task.seed = seed;
    }
    Ok(config)
}

fn write_artifacts(dir: &Path, config: &RunConfig, outcome: &Outcome, json: &str) -> CliResult<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("summary.json"), json)?;
    if config.output.formats.contains(&Format::Csv) {
        fs::write(dir.join("summary.csv"), summary_csv(&outcome.summary)?)?;
    }
    for a in &outcome.artifacts {
        fs::write(dir.join(&a.name), &a.contents)?;
    }
    Ok(())
}

/// Parses `args`, runs the task, writes artifacts and returns the exit status.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return EXIT_OK;
            }
            return report(stdout, None, &CliError::Parse(e.to_string()));
        }
    };
    let config = match resolve_config(&cli) {
        Ok(c) => c,
        Err(e) => return report(stdout, cli.out_dir.as_deref(), &e),
    };
    let dir = config.output.dir.clone();
    let outcome = match run(&config) {
        Ok(o) => o,
        Err(e) => return report(stdout, dir.as_deref(), &e),
    };
    let json = to_json(&outcome.summary);
    if let Some(dir) = &dir {
        if let Err(e) = write_artifacts(dir, &config, &outcome, &json) {
            return report(stdout, None, &e);
        }
    }
    let _ = stdout.write_all(json.as_bytes());
    for a in outcome.summary.audits.iter().filter(|a| !a.pass) {
        log::warn!("audit {} failed: {:e} > {:e}", a.name, a.value, a.tolerance);
    }
    outcome.summary.status
}

fn report(stdout: &mut dyn Write, dir: Option<&Path>, error: &CliError) -> i32 {
    log::error!("{error}");
    let json = to_json(&error.record());
    if let Some(dir) = dir {
        if fs::create_dir_all(dir).is_ok() {
            let _ = fs::write(dir.join("error.json"), &json);
        }
    }
    let _ = stdout.write_all(json.as_bytes());
    error.status()
}

pub fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).try_init();
}
