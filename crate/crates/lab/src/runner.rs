//! Simulation runs: trajectory, snapshot files, diagnostics CSV and JSON
//! summary.

use std::fs;
use std::path::{Path, PathBuf};

use kgsl::diagnostics::ConcentrationProbe;
use kgsl::field::{norm, NormSpec};
use kgsl::propagators::{evolve, Equation, EvolveParams, Evolvable, State, Trajectory};
use kgsl::scattering::{decay_fit, scattering_report, DecayFit};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::ExperimentConfig;
use crate::error::CliResult;
use crate::families::{initial_state, InitialState};
use crate::normspec::parse_norm_spec;
use crate::snapshot::SnapshotFile;

pub const DIAGNOSTICS_FILE: &str = "diagnostics.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const SCATTERING_FILE: &str = "scattering.csv";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// Result of a finished (possibly truncated) run.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub dir: PathBuf,
    pub summary: Value,
    pub truncated: bool,
}

/// Hex SHA-256 of the resolved configuration in canonical TOML form.
pub fn config_hash(config: &ExperimentConfig) -> String {
    Sha256::digest(config.to_toml().as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Summary fields shared by every subcommand.
pub fn provenance(command: &str, config: &ExperimentConfig) -> CliResult<serde_json::Map<String, Value>> {
    let mut map = serde_json::Map::new();
    map.insert("command".into(), json!(command));
    map.insert("code_version".into(), json!(env!("CARGO_PKG_VERSION")));
    map.insert("config_hash".into(), json!(config_hash(config)));
    map.insert("config".into(), serde_json::to_value(config)?);
    Ok(map)
}

pub fn write_json(path: &Path, value: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

/// Nonfinite values become `null` in JSON.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn fit_json(fit: &DecayFit) -> Value {
    json!({ "exponent": number(fit.exponent), "prefactor": number(fit.prefactor), "points": fit.points })
}

/// Runs the configured simulation and writes its artifacts.
pub fn simulate(config: &ExperimentConfig, command: &str) -> CliResult<RunOutcome> {
    config.validate()?;
    let dir = config.output_dir();
    fs::create_dir_all(&dir)?;
    match initial_state(config)? {
        InitialState::Kg(s) => run_trajectory(config, command, &dir, &s),
        InitialState::Nls(s) => run_trajectory(config, command, &dir, &s),
    }
}

struct Diagnostics {
    norms: Vec<(String, NormSpec)>,
    amounts: Vec<f64>,
    r_epsilon: Option<f64>,
    tolerance: f64,
}

impl Diagnostics {
    fn new(config: &ExperimentConfig) -> CliResult<Self> {
        let d = &config.diagnostics;
        let norms = d
            .norms
            .iter()
            .map(|s| {
                let spec = parse_norm_spec(s).map_err(|message| crate::error::CliError::Config {
                    field: "diagnostics.norms".into(),
                    message,
                })?;
                Ok((s.clone(), spec))
            })
            .collect::<CliResult<Vec<_>>>()?;
        let h = config.grid.length / config.grid.n as f64;
        Ok(Self {
            norms,
            amounts: d.concentration_amounts.clone(),
            r_epsilon: d.r_epsilon,
            tolerance: d.radius_tolerance.unwrap_or(h / 4.0),
        })
    }

    fn header(&self) -> Vec<String> {
        let mut cols: Vec<String> = [
            "t",
            "E",
            "E0",
            "M",
            "H",
            "boundary_leakage",
            "spectral_tail",
            "under_resolved",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        cols.extend(self.norms.iter().map(|(s, _)| format!("norm[{s}]")));
        cols.extend(self.amounts.iter().map(|a| format!("R_A[{a}]")));
        if let Some(eps) = self.r_epsilon {
            cols.push(format!("r_eps[{eps}]"));
        }
        cols
    }
}

fn run_trajectory<S: Evolvable<f64>>(
    config: &ExperimentConfig,
    command: &str,
    dir: &Path,
    state: &S,
) -> CliResult<RunOutcome> {
    let nonlinearity = config.nonlinearity();
    let params = EvolveParams {
        dt: config.time.dt,
        dt_save: config.time.dt_save,
        nonlinearity,
    };
    let traj = evolve(state, config.time.duration, params)?;
    let diag = Diagnostics::new(config)?;

    if config.output.snapshots {
        let snap_dir = dir.join(SNAPSHOT_DIR);
        fs::create_dir_all(&snap_dir)?;
        for (k, s) in traj.states().iter().enumerate() {
            SnapshotFile::from_state(s).write(&snap_dir.join(format!("snapshot_{k:05}.bin")))?;
        }
    }

    let e_initial = traj.records()[0].energy.energy;
    let rows = traj
        .states()
        .par_iter()
        .zip(traj.records().par_iter())
        .map(|(s, rec)| {
            let mut row = vec![
                rec.t,
                rec.energy.energy,
                rec.energy.free_energy,
                rec.energy.mass,
                rec.energy.hamiltonian,
                rec.boundary_leakage,
                rec.spectral_tail,
                if rec.under_resolved { 1.0 } else { 0.0 },
            ];
            for (_, spec) in &diag.norms {
                row.push(norm(s.u(), *spec)?);
            }
            if !diag.amounts.is_empty() || diag.r_epsilon.is_some() {
                let probe = ConcentrationProbe::new(s, nonlinearity)?;
                for &a in &diag.amounts {
                    row.push(probe.radius(a, diag.tolerance)?.radius.as_f64());
                }
                if let Some(eps) = diag.r_epsilon {
                    row.push(probe.radius((1.0 - eps) * e_initial, diag.tolerance)?.radius.as_f64());
                }
            }
            Ok(row)
        })
        .collect::<kgsl::Result<Vec<_>>>()?;

    let mut csv = csv::Writer::from_path(dir.join(DIAGNOSTICS_FILE))?;
    csv.write_record(diag.header())?;
    for row in &rows {
        csv.write_record(row.iter().map(|v| v.to_string()))?;
    }
    csv.flush()?;

    let mut summary = provenance(command, config)?;
    summary.insert("equation".into(), json!(S::EQUATION.tag()));
    summary.insert("snapshots".into(), json!(traj.len()));
    summary.insert("truncated".into(), json!(traj.is_truncated()));
    summary.insert(
        "blow_up".into(),
        traj.blow_up()
            .map(|b| json!({ "t": b.t, "message": b.message }))
            .unwrap_or(Value::Null),
    );
    let meta = traj.meta();
    summary.insert(
        "integrator".into(),
        json!({
            "name": meta.integrator,
            "dt": meta.dt,
            "steps_per_save": meta.steps_per_save,
            "nonlinearity": meta.nonlinearity.name(),
        }),
    );
    summary.insert(
        "drift".into(),
        json!({
            "energy": number(traj.relative_drift(|r| r.energy)),
            "mass": number(traj.relative_drift(|r| r.mass)),
            "hamiltonian": number(traj.relative_drift(|r| r.hamiltonian)),
        }),
    );
    let leakage = traj.records().iter().map(|r| r.boundary_leakage).fold(0.0, f64::max);
    summary.insert("max_boundary_leakage".into(), number(leakage));
    summary.insert(
        "under_resolved".into(),
        json!(traj.records().iter().any(|r| r.under_resolved)),
    );
    if diag.r_epsilon.is_some() && S::EQUATION == Equation::KleinGordon {
        let col = rows[0].len() - 1;
        summary.insert("r_eps_max_slope".into(), number(max_slope(&traj.times(), rows.iter().map(|r| r[col]))));
    }
    if config.diagnostics.scattering {
        summary.insert("scattering".into(), scattering_summary(&traj, dir)?);
    }
    if config.diagnostics.decay_t_min.is_some() || config.diagnostics.decay_t_max.is_some() {
        summary.insert("decay_fit".into(), decay_summary(config, &traj, dir)?);
    }
    let summary = Value::Object(summary);
    write_json(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(RunOutcome {
        dir: dir.to_path_buf(),
        summary,
        truncated: traj.is_truncated(),
    })
}

/// Largest `|r(t_k) - r(t_{k-1})| / (t_k - t_{k-1})` over consecutive finite
/// radii.
fn max_slope(times: &[f64], radii: impl Iterator<Item = f64>) -> f64 {
    let radii: Vec<f64> = radii.collect();
    let mut best = 0.0_f64;
    for k in 1..radii.len() {
        let (a, b) = (radii[k - 1], radii[k]);
        if a.is_finite() && b.is_finite() {
            best = best.max((b - a).abs() / (times[k] - times[k - 1]));
        }
    }
    best
}

fn scattering_summary<S: State<f64>>(traj: &Trajectory<S, f64>, dir: &Path) -> CliResult<Value> {
    let report = match scattering_report(traj) {
        Ok(r) => r,
        Err(e) => return Ok(json!({ "error": e.to_string() })),
    };
    let mut csv = csv::Writer::from_path(dir.join(SCATTERING_FILE))?;
    csv.write_record(["t", "residual", "increment", "x_partial", "nonlinear_partial"])?;
    for (k, (t, residual)) in report.residual_curve.iter().enumerate() {
        let increment = if k == 0 { f64::NAN } else { report.increments[k - 1] };
        csv.write_record([
            t.to_string(),
            residual.to_string(),
            increment.to_string(),
            report.x_partial[k].to_string(),
            report.nonlinear_partial[k].to_string(),
        ])?;
    }
    csv.flush()?;
    Ok(json!({
        "scattering_detected": report.scattering_detected,
        "final_increment": number(*report.increments.last().unwrap_or(&f64::NAN)),
        "x_norm": number(*report.x_partial.last().unwrap_or(&0.0)),
        "x_last_quarter_increment": number(report.x_last_quarter_increment),
        "nonlinear_l1l2": number(*report.nonlinear_partial.last().unwrap_or(&0.0)),
        "u_plus_free_energy": number(report.u_plus_energy),
        "decay_fit": report.decay_fit.as_ref().map(fit_json).unwrap_or(Value::Null),
    }))
}

fn decay_summary<S: State<f64>>(config: &ExperimentConfig, traj: &Trajectory<S, f64>, dir: &Path) -> CliResult<Value> {
    let t_min = config.diagnostics.decay_t_min.unwrap_or(0.0);
    let t_max = config.diagnostics.decay_t_max.unwrap_or(f64::INFINITY);
    let b0 = NormSpec::Besov {
        s: 0.0,
        p: f64::INFINITY,
        q: 2.0,
    };
    let samples = traj
        .states()
        .par_iter()
        .filter(|s| s.time() >= t_min && s.time() <= t_max)
        .map(|s| Ok((s.time(), norm(s.u(), b0)?)))
        .collect::<kgsl::Result<Vec<_>>>()?;
    let mut csv = csv::Writer::from_path(dir.join("decay.csv"))?;
    csv.write_record(["t", "besov_0_inf_2"])?;
    for (t, g) in &samples {
        csv.write_record([t.to_string(), g.to_string()])?;
    }
    csv.flush()?;
    Ok(match decay_fit(&samples, t_min, t_max) {
        Ok(fit) => fit_json(&fit),
        Err(e) => json!({ "error": e.to_string() }),
    })
}
