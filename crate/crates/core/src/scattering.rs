//! Numerical scattering detection: pulling nonlinear snapshots back along
//! the free flow and watching the profiles settle.

use crate::diagnostics::energy_densities;
use crate::error::{LabError, Result};
use crate::field::norms::{cumulative_time_norm, NormSpec, SpaceTimeNorm};
use crate::field::{norm, Field};
use crate::propagators::{Equation, State, Trajectory};
use crate::scalar::Real;

/// Largest pullback increment, over each of the last three gaps, for which
/// scattering is declared.
pub const CAUCHY_TOLERANCE: f64 = 1e-3;

/// Share of the linear energy density left outside the data radius.
pub const DATA_TAIL: f64 = 1e-6;

/// Radius of the smallest origin-centred disk holding all but [`DATA_TAIL`]
/// of the linear energy density of `s`.
pub fn data_radius<S: State<f64>>(s: &S) -> Result<f64> {
    let density = energy_densities(s, crate::nonlinearity::Nonlinearity::Off)?.linear.re();
    let grid = s.grid();
    let mut by_radius: Vec<(f64, f64)> = density
        .iter()
        .enumerate()
        .map(|(idx, &d)| {
            let (x, y) = grid.point(idx);
            (x.hypot(y), d)
        })
        .collect();
    by_radius.sort_by(|a, b| b.0.total_cmp(&a.0));
    let allowed = DATA_TAIL * density.iter().sum::<f64>();
    let mut tail = 0.0;
    for &(r, d) in &by_radius {
        tail += d;
        if tail > allowed {
            return Ok(r);
        }
    }
    Ok(0.0)
}

/// Klein-Gordon verdicts need `L >= 2 (T + data radius)` so that nothing
/// wraps around the periodic box within the run.
fn check_box<S: State<f64>>(traj: &Trajectory<S, f64>) -> Result<()> {
    if S::EQUATION != Equation::KleinGordon {
        return Ok(());
    }
    let first = &traj.states()[0];
    let span = traj.last().time() - first.time();
    let needed = 2.0 * (span + data_radius(first)?);
    let length = first.grid().length();
    if length < needed {
        return Err(LabError::Precondition(format!(
            "box length {length} is below 2 (T + data radius) = {needed}; waves would wrap around"
        )));
    }
    Ok(())
}

/// Profiles `U(-t) u(t)` for every snapshot, all stamped at time zero.
pub fn pullback<T: Real, S: State<T>>(traj: &Trajectory<S, T>) -> Vec<(T, S)> {
    traj.states()
        .iter()
        .map(|s| (s.time(), s.free_flow(-s.time()).with_time(T::zero())))
        .collect()
}

/// Distance in the free energy norm: `E0(a - b)^{1/2}` for Klein-Gordon,
/// `‖a - b‖_{H^1}` for Schrödinger.
pub fn free_distance<T: Real, S: State<T>>(a: &S, b: &S) -> Result<T> {
    let du = a.u().sub(b.u())?;
    let mut total = du.transform().weighted_l2_sq(|x, y| T::one() + x * x + y * y);
    if let (Some(va), Some(vb)) = (a.velocity(), b.velocity()) {
        total = total + va.sub(vb)?.integrate(|c| c.norm_sqr());
    }
    Ok(total.sqrt())
}

/// Free-energy norm of a single state.
pub fn free_size<T: Real, S: State<T>>(s: &S) -> T {
    let mut total = s.u().transform().weighted_l2_sq(|x, y| T::one() + x * x + y * y);
    if let Some(v) = s.velocity() {
        total = total + v.integrate(|c| c.norm_sqr());
    }
    total.sqrt()
}

/// Least-squares fit `g(t) ≈ C t^exponent` on log-log axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    pub exponent: f64,
    pub prefactor: f64,
    pub points: usize,
}

/// Fits the power law to the samples with `t` in `[t_min, t_max]`.
pub fn decay_fit(samples: &[(f64, f64)], t_min: f64, t_max: f64) -> Result<DecayFit> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, g)| *t >= t_min && *t <= t_max && *t > 0.0 && *g > 0.0)
        .map(|(t, g)| (t.ln(), g.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(LabError::Trajectory(format!(
            "decay fit needs two positive samples in [{t_min}, {t_max}], got {}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(LabError::Trajectory("decay fit needs distinct sample times".into()));
    }
    let exponent = sxy / sxx;
    Ok(DecayFit {
        exponent,
        prefactor: (my - exponent * mx).exp(),
        points: pts.len(),
    })
}

/// Summary of a scattering analysis.
#[derive(Clone, Debug)]
pub struct ScatteringReport<S> {
    /// Last pullback profile.
    pub u_plus: S,
    /// `E0(u_plus)` (Klein-Gordon) or `‖u_plus‖_{H^1}^2` (Schrödinger).
    pub u_plus_energy: f64,
    /// `(t, distance(U(-t)u(t), u_plus))`, equal to the free-norm distance
    /// between `u(t)` and `U(t)u_plus`.
    pub residual_curve: Vec<(f64, f64)>,
    /// Free-norm distances between consecutive pullbacks.
    pub increments: Vec<f64>,
    /// Running `‖u‖_{L^8 L^16}` over `[0, t_k]`.
    pub x_partial: Vec<f64>,
    /// Running `‖f(u)‖_{L^1 L^2}` over `[0, t_k]`.
    pub nonlinear_partial: Vec<f64>,
    /// Power-law fit of `‖u(t)‖_{B^0_{∞,2}}` on the second half of the run.
    pub decay_fit: Option<DecayFit>,
    /// Relative growth of the `X` partial sum over the last quarter.
    pub x_last_quarter_increment: f64,
    pub scattering_detected: bool,
}

/// Pullback profile, residuals, Strichartz partial sums and decay fit.
pub fn scattering_report<S: State<f64>>(traj: &Trajectory<S, f64>) -> Result<ScatteringReport<S>> {
    if traj.is_truncated() {
        return Err(LabError::Trajectory("trajectory was truncated by a blow-up".into()));
    }
    if traj.len() < 10 {
        return Err(LabError::Trajectory(format!("need at least 10 snapshots, got {}", traj.len())));
    }
    check_box(traj)?;
    let nonlinearity = traj.meta().nonlinearity;
    let pulled = pullback(traj);
    let u_plus = pulled.last().expect("nonempty").1.clone();
    let residual_curve = pulled
        .iter()
        .map(|(t, p)| Ok((*t, free_distance(p, &u_plus)?)))
        .collect::<Result<Vec<_>>>()?;
    let increments = pulled
        .windows(2)
        .map(|w| free_distance(&w[0].1, &w[1].1))
        .collect::<Result<Vec<_>>>()?;

    let dt = traj.dt_save();
    let l16 = traj
        .fields()
        .map(|u| norm(u, NormSpec::Lp { p: 16.0 }))
        .collect::<Result<Vec<_>>>()?;
    let x_partial = cumulative_time_norm(&l16, dt, SpaceTimeNorm::x().time_exponent);
    let f_l2 = traj
        .fields()
        .map(|u| {
            let values = u.values().iter().map(|&v| nonlinearity.f(v)).collect::<Result<Vec<_>>>()?;
            Ok(Field::complex(u.grid(), values)?.integrate(|c| c.norm_sqr()).sqrt())
        })
        .collect::<Result<Vec<_>>>()?;
    let nonlinear_partial = cumulative_time_norm(&f_l2, dt, 1.0);

    let last = *x_partial.last().expect("nonempty");
    let quarter = x_partial[(3 * (x_partial.len() - 1)) / 4];
    let x_last_quarter_increment = if last == 0.0 { 0.0 } else { (last - quarter) / last };

    let half = traj.states()[traj.len() / 2].time();
    let besov = traj
        .states()
        .iter()
        .filter(|s| s.time() >= half && s.time() > 0.0)
        .map(|s| {
            Ok((
                s.time(),
                norm(
                    s.u(),
                    NormSpec::Besov {
                        s: 0.0,
                        p: f64::INFINITY,
                        q: 2.0,
                    },
                )?,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let decay = decay_fit(&besov, half, f64::INFINITY).ok();

    let tail = &increments[increments.len().saturating_sub(3)..];
    let scattering_detected = tail.len() == 3 && tail.iter().all(|&d| d <= CAUCHY_TOLERANCE);
    let u_plus_energy = free_size(&u_plus).powi(2);
    Ok(ScatteringReport {
        u_plus,
        u_plus_energy,
        residual_curve,
        increments,
        x_partial,
        nonlinear_partial,
        decay_fit: decay,
        x_last_quarter_increment,
        scattering_detected,
    })
}

/// `‖u‖_{L^∞ H^1} + ‖u‖_{L^4 H^{1,4}}` over a Schrödinger trajectory.
pub fn s1_norm<T: Real, S: State<T>>(traj: &Trajectory<S, T>) -> Result<T> {
    if S::EQUATION != Equation::Schrodinger {
        return Err(LabError::Precondition("the S^1 norm is defined for Schrödinger trajectories".into()));
    }
    let mut total = T::zero();
    for part in SpaceTimeNorm::s1_parts() {
        total = total + part.evaluate(traj.fields(), traj.dt_save())?;
    }
    Ok(total)
}
