//! Sweeps behind the `counterexample`, `probe-tm` and `probe-log`
//! subcommands.

use std::fs;

use kgsl::constructions::{counterexample_growth, CounterexampleParams};
use kgsl::field::norms::gradient_norm_sq;
use kgsl::field::{Field, Grid};
use kgsl::nonlinearity::{tm_functional, LogInequality, LogInequalityTerms, Nonlinearity};
use kgsl::constructions::moser_bump;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, ProbeScaling};
use crate::error::CliResult;
use crate::runner::{number, provenance, write_json, SUMMARY_FILE};

/// Smallest power-of-two grid on `L = 4π` carrying the shell of `params`.
pub fn counterexample_grid(params: &CounterexampleParams, n: Option<usize>) -> CliResult<Grid<f64>> {
    let length = 4.0 * std::f64::consts::PI;
    let n = n.unwrap_or_else(|| {
        let needed = (params.top_frequency() * length / std::f64::consts::PI).ceil() as usize;
        needed.next_power_of_two().max(16)
    });
    Ok(Grid::new(n, length)?)
}

/// One row of the growth sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthRow {
    pub n_cut: f64,
    pub norm: f64,
    pub ratio: f64,
    pub contrast: Option<f64>,
}

pub fn growth_rows(config: &ExperimentConfig) -> CliResult<Vec<GrowthRow>> {
    let c = &config.counterexample;
    let (p, q) = c.exponents();
    let kind = c.kind.equation();
    c.sweep
        .par_iter()
        .map(|&n_cut| {
            let params = CounterexampleParams::new(n_cut, c.a, kind)?;
            let norm = counterexample_growth(&params, p, q, c.eps, Nonlinearity::Exponential)?;
            let contrast = if c.contrast {
                Some(counterexample_growth(&params, p, q, c.eps, Nonlinearity::Power5)?)
            } else {
                None
            };
            Ok(GrowthRow {
                n_cut,
                norm,
                ratio: norm / params.log_n().sqrt(),
                contrast,
            })
        })
        .collect()
}

/// Bound table for `counterexample.n_cut` and the growth sweep.
pub fn counterexample(config: &ExperimentConfig) -> CliResult<Value> {
    config.validate_counterexample()?;
    let c = &config.counterexample;
    let dir = config.output_dir();
    fs::create_dir_all(&dir)?;
    let params = CounterexampleParams::new(c.n_cut, c.a, c.kind.equation())?;
    let grid = counterexample_grid(&params, c.grid_n)?;
    let lattice = params.lattice_norms(grid)?;

    let mut bounds = csv::Writer::from_path(dir.join("vn_bounds.csv"))?;
    bounds.write_record(["quantity", "lattice", "reference", "relation"])?;
    let table = [
        ("grad_sq", lattice.gradient_sq, params.gradient_sq_exact(), "approx"),
        ("l2_sq", lattice.l2_sq, params.l2_sq_bound(), "below"),
        ("origin_value", lattice.origin, params.pointwise_lower_bound(0.0), "above"),
    ];
    for (name, value, reference, relation) in table {
        bounds.write_record([name.to_string(), value.to_string(), reference.to_string(), relation.to_string()])?;
    }
    bounds.flush()?;

    let rows = growth_rows(config)?;
    let mut sweep = csv::Writer::from_path(dir.join("growth_sweep.csv"))?;
    sweep.write_record(["N", "log_N", "norm", "norm_over_sqrt_log_N", "power5_norm"])?;
    for r in &rows {
        sweep.write_record([
            r.n_cut.to_string(),
            r.n_cut.ln().to_string(),
            r.norm.to_string(),
            r.ratio.to_string(),
            r.contrast.map(|v| v.to_string()).unwrap_or_default(),
        ])?;
    }
    sweep.flush()?;

    let (p, q) = c.exponents();
    let nondecreasing = rows.windows(2).all(|w| w[1].ratio >= w[0].ratio);
    let contrast: Vec<f64> = rows.iter().filter_map(|r| r.contrast).collect();
    let contrast_ratio = match (contrast.first(), contrast.last()) {
        (Some(a), Some(b)) if *a > 0.0 => b / a,
        _ => f64::NAN,
    };
    let eps_scaling = counterexample_growth(&params, p, q, 2.0 * c.eps, Nonlinearity::Exponential)?
        / counterexample_growth(&params, p, q, c.eps, Nonlinearity::Exponential)?;

    let mut summary = provenance("counterexample", config)?;
    summary.insert(
        "bounds".into(),
        json!({
            "grid_n": grid.n(),
            "modes": lattice.modes,
            "grad_sq": number(lattice.gradient_sq),
            "grad_sq_exact": number(params.gradient_sq_exact()),
            "l2_sq": number(lattice.l2_sq),
            "l2_sq_bound": number(params.l2_sq_bound()),
            "origin_value": number(lattice.origin),
            "origin_lower_bound": number(params.pointwise_lower_bound(0.0)),
        }),
    );
    summary.insert(
        "growth".into(),
        json!({
            "p": number(p),
            "q": number(q),
            "eps": c.eps,
            "ratio_nondecreasing": nondecreasing,
            "power5_ratio_max_over_min_n": number(contrast_ratio),
            "eps_doubling_factor": number(eps_scaling),
        }),
    );
    let summary = Value::Object(summary);
    write_json(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}

/// Moser bump of parameter `m` normalized as configured.
pub fn normalized_moser(config: &ExperimentConfig, m: f64) -> CliResult<Field<f64>> {
    let p = &config.probe;
    let grid = Grid::new(p.n, p.length)?;
    let bump = moser_bump(m, p.rho, grid)?;
    let factor = match p.scaling {
        ProbeScaling::Unit => 1.0 / kgsl::field::norm(&bump, kgsl::field::NormSpec::HMu { mu: p.mu })?,
        ProbeScaling::Gradient => (p.lambda / gradient_norm_sq(&bump)).sqrt(),
    };
    Ok(bump.scaled(factor))
}

/// `(m, ‖φ_m‖_{H_μ}, tm)` over the configured family.
pub fn tm_rows(config: &ExperimentConfig) -> CliResult<Vec<(f64, f64, f64)>> {
    config.validate_probe()?;
    let mu = config.probe.mu;
    config
        .probe
        .m
        .par_iter()
        .map(|&m| {
            let (tm, h_mu) = tm_functional(&normalized_moser(config, m)?, mu)?;
            Ok((m, h_mu, tm))
        })
        .collect()
}

pub fn probe_tm(config: &ExperimentConfig) -> CliResult<Value> {
    let rows = tm_rows(config)?;
    let dir = config.output_dir();
    fs::create_dir_all(&dir)?;
    let mut csv = csv::Writer::from_path(dir.join("probe_tm.csv"))?;
    csv.write_record(["m", "h_mu_norm", "tm_value"])?;
    for (m, h, tm) in &rows {
        csv.write_record([m.to_string(), h.to_string(), tm.to_string()])?;
    }
    csv.flush()?;
    let tms: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let max = tms.iter().copied().fold(f64::MIN, f64::max);
    let min = tms.iter().copied().fold(f64::MAX, f64::min);
    let mut summary = provenance("probe-tm", config)?;
    summary.insert(
        "tm".into(),
        json!({
            "max": number(max),
            "min": number(min),
            "max_over_min": number(max / min),
            "increasing": tms.windows(2).all(|w| w[1] > w[0]),
        }),
    );
    let summary = Value::Object(summary);
    write_json(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}

pub fn probe_log(config: &ExperimentConfig) -> CliResult<Value> {
    config.validate_probe()?;
    let p = &config.probe;
    let ineq = LogInequality::new(p.log_alpha, p.log_lambda, p.mu)?;
    let terms: Vec<(f64, LogInequalityTerms)> = p
        .m
        .par_iter()
        .map(|&m| Ok((m, ineq.terms(&normalized_moser(config, m)?)?)))
        .collect::<CliResult<_>>()?;
    let family: Vec<LogInequalityTerms> = terms.iter().map(|t| t.1).collect();
    let c_lambda = ineq.minimal_constant(&family);
    let dir = config.output_dir();
    fs::create_dir_all(&dir)?;
    let mut csv = csv::Writer::from_path(dir.join("probe_log.csv"))?;
    csv.write_record(["m", "linf_sq", "h_mu_norm", "holder_norm", "gap", "lhs_over_rhs"])?;
    for (m, t) in &terms {
        csv.write_record([
            m.to_string(),
            t.linf_sq.to_string(),
            t.h_mu.to_string(),
            t.holder.to_string(),
            ineq.gap(t, c_lambda).to_string(),
            ineq.saturation(t, c_lambda).to_string(),
        ])?;
    }
    csv.flush()?;
    let mut summary = provenance("probe-log", config)?;
    summary.insert("minimal_c_lambda".into(), number(c_lambda));
    let summary = Value::Object(summary);
    write_json(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(summary)
}
