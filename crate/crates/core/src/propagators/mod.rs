//! Exact free flows and split-step nonlinear evolution.

mod split;
mod state;
mod trajectory;

pub use split::{step_kg, step_nls, Evolvable, Integrator, KgIntegrator, NlsIntegrator};
pub use state::{free_kg, free_nls, Equation, KgState, NlsState, State};
pub use trajectory::{
    evolve, evolve_with, snapshot_record, BlowUp, EvolveParams, SnapshotRecord, StepMeta, Trajectory, TAIL_FLAG,
};
