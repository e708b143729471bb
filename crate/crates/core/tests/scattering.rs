use kgsl::field::Field;
use kgsl::nonlinearity::Nonlinearity;
use kgsl::propagators::{evolve, EvolveParams, KgState, NlsState};
use kgsl::scattering::{data_radius, decay_fit, free_distance, free_size, pullback, s1_norm, scattering_report};
use kgsl::{Grid2D, LabError};

fn kg_bump(amp: f64) -> KgState<f64> {
    let grid = Grid2D::new(128, 40.0).unwrap();
    let u = Field::from_real_fn(grid, |x, y| amp * (-(x * x + y * y)).exp());
    KgState::at_rest(u).unwrap()
}

fn params(nonlinearity: Nonlinearity) -> EvolveParams<f64> {
    EvolveParams {
        dt: 0.05,
        dt_save: 0.5,
        nonlinearity,
    }
}

#[test]
fn decay_fit_recovers_power_law() {
    let samples: Vec<(f64, f64)> = (1..=20).map(|k| (k as f64, 3.0 * (k as f64).powf(-0.75))).collect();
    let fit = decay_fit(&samples, 2.0, 15.0).unwrap();
    assert!((fit.exponent + 0.75).abs() < 1e-12);
    assert!((fit.prefactor - 3.0).abs() < 1e-11);
    assert_eq!(fit.points, 14);
    assert!(decay_fit(&samples, 30.0, 40.0).is_err());
}

#[test]
fn free_trajectory_pulls_back_to_initial_data() {
    let s = kg_bump(0.3);
    let traj = evolve(&s, 6.0, params(Nonlinearity::Off)).unwrap();
    for (_, p) in pullback(&traj) {
        assert!(free_distance(&p, &s).unwrap() < 1e-12 * free_size(&s));
    }
    let report = scattering_report(&traj).unwrap();
    assert!(report.scattering_detected);
    assert!(report.increments.iter().all(|&d| d < 1e-12));
    assert!(report.nonlinear_partial.iter().all(|&v| v == 0.0));
    assert!(report.decay_fit.is_some());
}

#[test]
fn small_nonlinear_data_scatters_with_monotone_partial_sums() {
    let traj = evolve(&kg_bump(0.3), 10.0, params(Nonlinearity::Exponential)).unwrap();
    let report = scattering_report(&traj).unwrap();
    assert!(report.x_partial.windows(2).all(|w| w[1] >= w[0]));
    assert!(report.nonlinear_partial.windows(2).all(|w| w[1] >= w[0]));
    assert!(*report.nonlinear_partial.last().unwrap() > 0.0);
    assert_eq!(report.residual_curve.len(), traj.len());
    assert!(report.residual_curve.last().unwrap().1 == 0.0);
    let e_end = traj.records().last().unwrap().energy.energy;
    assert!(report.u_plus_energy <= e_end * (1.0 + 1e-12));
    let e0 = traj.records()[0].energy.energy;
    let drift = traj.relative_drift(|r| r.energy);
    assert!(report.u_plus_energy <= e0 * (1.0 + drift + 1e-12));
}

#[test]
fn short_or_truncated_trajectories_are_rejected() {
    let traj = evolve(&kg_bump(0.3), 2.0, params(Nonlinearity::Off)).unwrap();
    assert!(matches!(scattering_report(&traj), Err(LabError::Trajectory(_))));
    assert!(matches!(s1_norm(&traj), Err(LabError::Precondition(_))));
}

#[test]
fn s1_norm_of_free_schrodinger_flow() {
    let grid = Grid2D::new(64, 20.0).unwrap();
    let u = Field::from_real_fn(grid, |x, y| 0.2 * (-(x * x + y * y)).exp());
    let traj = evolve(&NlsState::new(u, 0.0), 2.0, params(Nonlinearity::Off)).unwrap();
    let value = s1_norm(&traj).unwrap();
    assert!(value.is_finite() && value > 0.0);
}

#[test]
fn small_boxes_are_rejected_for_klein_gordon_verdicts() {
    let s = kg_bump(0.3);
    let radius = data_radius(&s).unwrap();
    assert!(radius > 2.0 && radius < 6.0, "radius {radius}");
    let traj = evolve(&s, 18.0, params(Nonlinearity::Exponential)).unwrap();
    assert!(matches!(scattering_report(&traj), Err(LabError::Precondition(_))));

    let u = Field::from_real_fn(Grid2D::new(64, 40.0).unwrap(), |x, y| 0.3 * (-(x * x + y * y)).exp());
    let nls = evolve(&NlsState::new(u, 0.0), 16.0, params(Nonlinearity::Exponential)).unwrap();
    assert!(scattering_report(&nls).is_ok());
}
