use super::split::{Evolvable, Integrator};
use super::state::State;
use crate::diagnostics::energy::{boundary_leakage, energy_report, EnergyReport};
use crate::error::{LabError, Result};
use crate::field::spectral::spectral_tail_fraction;
use crate::field::Field;
use crate::nonlinearity::Nonlinearity;
use crate::scalar::Real;

/// Spectral tail fraction above which a snapshot is flagged as under-resolved.
pub const TAIL_FLAG: f64 = 1e-6;

/// Time stepping parameters of a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveParams<T> {
    pub dt: T,
    pub dt_save: T,
    pub nonlinearity: Nonlinearity,
}

/// Integrator bookkeeping stored with a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct StepMeta<T> {
    pub integrator: &'static str,
    /// Step actually used; `dt_save` is an integer multiple of it.
    pub dt: T,
    pub steps_per_save: usize,
    pub nonlinearity: Nonlinearity,
}

/// Diagnostics recorded with every snapshot.
#[derive(Clone, Debug, PartialEq)]
pub struct SnapshotRecord<T> {
    pub t: T,
    pub energy: EnergyReport<T>,
    pub boundary_leakage: T,
    pub spectral_tail: T,
    pub under_resolved: bool,
}

/// Where and why a run stopped early.
#[derive(Clone, Debug, PartialEq)]
pub struct BlowUp<T> {
    /// Time of the last completed step.
    pub t: T,
    pub message: String,
}

/// Snapshots saved at a uniform interval.
#[derive(Clone, Debug)]
pub struct Trajectory<S, T> {
    states: Vec<S>,
    records: Vec<SnapshotRecord<T>>,
    dt_save: T,
    meta: StepMeta<T>,
    blow_up: Option<BlowUp<T>>,
}

impl<T: Real, S: State<T>> Trajectory<S, T> {
    /// Wraps precomputed snapshots, checking the uniform cadence.
    pub fn from_states(states: Vec<S>, dt_save: T, meta: StepMeta<T>) -> Result<Self> {
        let records = states
            .iter()
            .map(|s| snapshot_record(s, meta.nonlinearity))
            .collect::<Result<Vec<_>>>()?;
        let traj = Self {
            states,
            records,
            dt_save,
            meta,
            blow_up: None,
        };
        traj.check_spacing()?;
        Ok(traj)
    }

    fn check_spacing(&self) -> Result<()> {
        if self.states.is_empty() {
            return Err(LabError::Trajectory("no snapshots".into()));
        }
        let t0 = self.states[0].time();
        let scale = self.dt_save.max(T::one());
        for (k, s) in self.states.iter().enumerate() {
            let expected = t0 + self.dt_save * T::from_count(k);
            if (s.time() - expected).abs() > T::lit(1e-12) * scale * T::from_count(k.max(1)) {
                return Err(LabError::Trajectory(format!(
                    "snapshot {k} at t = {} breaks the uniform spacing {}",
                    s.time(),
                    self.dt_save
                )));
            }
        }
        Ok(())
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn records(&self) -> &[SnapshotRecord<T>] {
        &self.records
    }

    pub fn fields(&self) -> impl Iterator<Item = &Field<T>> {
        self.states.iter().map(|s| s.u())
    }

    pub fn times(&self) -> Vec<T> {
        self.states.iter().map(|s| s.time()).collect()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn dt_save(&self) -> T {
        self.dt_save
    }

    pub fn meta(&self) -> &StepMeta<T> {
        &self.meta
    }

    pub fn blow_up(&self) -> Option<&BlowUp<T>> {
        self.blow_up.as_ref()
    }

    pub fn is_truncated(&self) -> bool {
        self.blow_up.is_some()
    }

    pub fn last(&self) -> &S {
        self.states.last().expect("trajectories are never empty")
    }

    /// `max_t |q(t) - q(0)| / |q(0)|` for a recorded quantity.
    pub fn relative_drift(&self, quantity: impl Fn(&EnergyReport<T>) -> T) -> T {
        let q0 = quantity(&self.records[0].energy);
        let worst = self
            .records
            .iter()
            .map(|r| (quantity(&r.energy) - q0).abs())
            .fold(T::zero(), |a, b| a.max(b));
        if q0 == T::zero() {
            worst
        } else {
            worst / q0.abs()
        }
    }
}

/// Energies, boundary leakage and resolution monitor of one state.
pub fn snapshot_record<T: Real, S: State<T>>(state: &S, nonlinearity: Nonlinearity) -> Result<SnapshotRecord<T>> {
    let energy = energy_report(state, nonlinearity)?;
    let spectral_tail = spectral_tail_fraction(&state.u().transform());
    Ok(SnapshotRecord {
        t: state.time(),
        energy,
        boundary_leakage: boundary_leakage(state),
        spectral_tail,
        under_resolved: spectral_tail > T::lit(TAIL_FLAG),
    })
}

/// Number of steps and the adjusted step so that `dt_save` is a whole
/// number of steps no longer than the requested `dt`.
fn steps_per_save<T: Real>(dt: T, dt_save: T) -> Result<(usize, T)> {
    if !(dt > T::zero() && dt_save > T::zero()) {
        return Err(LabError::InvalidParameter(format!(
            "dt = {dt} and dt_save = {dt_save} must be positive"
        )));
    }
    let ratio = dt_save / dt;
    let mut k = ratio.round();
    if (ratio - k).abs() > T::lit(1e-9) * ratio {
        k = ratio.ceil();
    }
    let k = k.to_usize().unwrap_or(0).max(1);
    Ok((k, dt_save / T::from_count(k)))
}

/// Evolves `state` for `duration`, saving every `dt_save`.
///
/// `duration` must be a whole number of save intervals. A nonlinearity
/// overflow stops the run; the trajectory keeps every snapshot before it and
/// carries a [`BlowUp`] record.
pub fn evolve<T: Real, S: Evolvable<T>>(state: &S, duration: T, params: EvolveParams<T>) -> Result<Trajectory<S, T>> {
    evolve_with(state, duration, params, |_, _| {})
}

/// [`evolve`] with a callback invoked on every saved snapshot.
pub fn evolve_with<T: Real, S: Evolvable<T>>(
    state: &S,
    duration: T,
    params: EvolveParams<T>,
    mut observe: impl FnMut(&S, &SnapshotRecord<T>),
) -> Result<Trajectory<S, T>> {
    if !(duration >= T::zero()) {
        return Err(LabError::InvalidParameter(format!("duration {duration} must be nonnegative")));
    }
    let (per_save, dt) = steps_per_save(params.dt, params.dt_save)?;
    let saves_f = duration / params.dt_save;
    let saves = saves_f.round();
    if (saves_f - saves).abs() > T::lit(1e-9) * saves_f.max(T::one()) {
        return Err(LabError::InvalidParameter(format!(
            "duration {duration} is not a whole number of save intervals {}",
            params.dt_save
        )));
    }
    let saves = saves.to_usize().unwrap_or(0);
    let meta = StepMeta {
        integrator: "strang-spectral",
        dt,
        steps_per_save: per_save,
        nonlinearity: params.nonlinearity,
    };

    let first = snapshot_record(state, params.nonlinearity)?;
    observe(state, &first);
    let mut traj = Trajectory {
        states: vec![state.clone()],
        records: vec![first],
        dt_save: params.dt_save,
        meta,
        blow_up: None,
    };
    let mut stepper = state.stepper(dt, params.nonlinearity)?;
    let t0 = state.time();
    'saves: for k in 1..=saves {
        for _ in 0..per_save {
            let before = stepper.time();
            if let Err(e) = stepper.step() {
                traj.blow_up = Some(BlowUp {
                    t: before,
                    message: e.to_string(),
                });
                break 'saves;
            }
        }
        // re-anchor on the save grid so the cadence stays exact
        let snap = stepper.state().with_time(t0 + params.dt_save * T::from_count(k));
        let record = match snapshot_record(&snap, params.nonlinearity) {
            Ok(r) => r,
            Err(e) => {
                traj.blow_up = Some(BlowUp {
                    t: snap.time(),
                    message: e.to_string(),
                });
                break;
            }
        };
        observe(&snap, &record);
        traj.states.push(snap);
        traj.records.push(record);
    }
    Ok(traj)
}
