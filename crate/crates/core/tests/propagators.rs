use kgsl::field::norms::relative_l2_error;
use kgsl::field::{Field, Grid};
use kgsl::nonlinearity::Nonlinearity;
use kgsl::propagators::{
    evolve, free_kg, free_nls, step_kg, step_nls, EvolveParams, KgState, NlsState, State,
};
use num_complex::Complex;

fn gaussian(grid: Grid<f64>, amp: f64, width: f64) -> Field<f64> {
    Field::from_real_fn(grid, |x, y| amp * (-(x * x + y * y) / (width * width)).exp())
}

fn kg_gaussian(n: usize, length: f64, amp: f64) -> KgState<f64> {
    let grid = Grid::new(n, length).unwrap();
    let u = gaussian(grid, amp, 1.0);
    let udot = Field::from_real_fn(grid, |x, y| 0.5 * amp * x * (-(x * x + y * y)).exp());
    KgState::new(u, udot, 0.0).unwrap()
}

#[test]
fn free_kg_identity_and_group_law() {
    let s = kg_gaussian(64, 20.0, 0.3);
    let same = free_kg(&s, 0.0);
    assert!(relative_l2_error(same.u(), s.u()) < 1e-14);
    let a = free_kg(&free_kg(&s, 0.7), 1.9);
    let b = free_kg(&s, 2.6);
    assert!(relative_l2_error(a.u(), b.u()) < 1e-12);
    assert!(relative_l2_error(a.udot(), b.udot()) < 1e-12);
    assert!((a.time() - 2.6).abs() < 1e-15);
}

#[test]
fn free_kg_single_mode() {
    let grid = Grid::new(32, 2.0 * std::f64::consts::PI).unwrap();
    let (k1, k2) = (3.0, -2.0);
    let u0 = Field::from_real_fn(grid, |x, y| (k1 * x + k2 * y).cos());
    let s = KgState::at_rest(u0).unwrap();
    let t = 1.234;
    let w = (1.0f64 + k1 * k1 + k2 * k2).sqrt();
    let out = free_kg(&s, t);
    let expected = Field::from_real_fn(grid, |x, y| (t * w).cos() * (k1 * x + k2 * y).cos());
    assert!(relative_l2_error(out.u(), &expected) < 1e-12);
}

#[test]
fn free_kg_conserves_free_energy() {
    let s = kg_gaussian(64, 20.0, 0.3);
    let e0 = kgsl::diagnostics::energy_report(&s, Nonlinearity::Off).unwrap().free_energy;
    let e1 = kgsl::diagnostics::energy_report(&free_kg(&s, 5.3), Nonlinearity::Off)
        .unwrap()
        .free_energy;
    assert!(((e1 - e0) / e0).abs() < 1e-12);
}

#[test]
fn free_nls_mass_and_gaussian() {
    let grid = Grid::new(256, 40.0).unwrap();
    let u0 = gaussian(grid, 1.0, 1.0);
    let s = NlsState::new(u0, 0.0);
    assert!(relative_l2_error(free_nls(&s, 0.0).u(), s.u()) < 1e-14);
    let t = 0.8;
    let out = free_nls(&s, t);
    let m0 = s.u().integrate(|c| c.norm_sqr());
    let m1 = out.u().integrate(|c| c.norm_sqr());
    assert!(((m1 - m0) / m0).abs() < 1e-13);
    // u(t) = exp(-|x|^2 / (1 + 4it)) / (1 + 4it)
    let d = Complex::new(1.0, 4.0 * t);
    let exact = Field::from_fn(grid, |x, y| (Complex::new(-(x * x + y * y), 0.0) / d).exp() / d);
    let worst = out
        .u()
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-6, "max error {worst}");
}

#[test]
fn disabled_nonlinearity_is_free_flow() {
    let s = kg_gaussian(64, 20.0, 0.3);
    let stepped = step_kg(&s, 0.01, Nonlinearity::Off).unwrap();
    let free = free_kg(&s, 0.01);
    assert!(relative_l2_error(stepped.u(), free.u()) < 1e-13);
    assert!(relative_l2_error(stepped.udot(), free.udot()) < 1e-13);

    let n = NlsState::new(s.u().clone(), 0.0);
    let stepped = step_nls(&n, 0.01, Nonlinearity::Off).unwrap();
    assert!(relative_l2_error(stepped.u(), free_nls(&n, 0.01).u()) < 1e-13);
}

#[test]
fn nls_kick_preserves_modulus_and_mass() {
    let grid = Grid::new(64, 20.0).unwrap();
    let u0 = gaussian(grid, 0.2, 1.5);
    let s = NlsState::new(u0, 0.0);
    let traj = evolve(
        &s,
        1.0,
        EvolveParams {
            dt: 0.01,
            dt_save: 0.5,
            nonlinearity: Nonlinearity::Exponential,
        },
    )
    .unwrap();
    assert!(traj.relative_drift(|e| e.mass) < 1e-12);
}

fn kg_drift(dt: f64) -> f64 {
    let s = kg_gaussian(64, 24.0, 0.4);
    let traj = evolve(
        &s,
        2.0,
        EvolveParams {
            dt,
            dt_save: 0.5,
            nonlinearity: Nonlinearity::Exponential,
        },
    )
    .unwrap();
    traj.relative_drift(|e| e.energy)
}

#[test]
fn kg_splitting_is_second_order() {
    let coarse = kg_drift(0.04);
    let fine = kg_drift(0.02);
    let ratio = coarse / fine;
    assert!(ratio > 3.2 && ratio < 4.8, "drift ratio {ratio} ({coarse:e} -> {fine:e})");
}

#[test]
fn time_reversal_returns_initial_data() {
    let s = kg_gaussian(64, 24.0, 0.4);
    let params = EvolveParams {
        dt: 0.01,
        dt_save: 1.0,
        nonlinearity: Nonlinearity::Exponential,
    };
    let forward = evolve(&s, 2.0, params).unwrap();
    let back = evolve(&forward.last().reversed(), 2.0, params).unwrap();
    let recovered = back.last().reversed();
    assert!(relative_l2_error(recovered.u(), s.u()) < 1e-10);
    assert!(relative_l2_error(recovered.udot(), s.udot()) < 1e-10);
}

#[test]
fn zero_duration_gives_one_snapshot() {
    let s = kg_gaussian(32, 16.0, 0.1);
    let traj = evolve(
        &s,
        0.0,
        EvolveParams {
            dt: 0.01,
            dt_save: 0.1,
            nonlinearity: Nonlinearity::Exponential,
        },
    )
    .unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(traj.records().len(), 1);
}

#[test]
fn blow_up_truncates_trajectory() {
    let grid = Grid::new(32, 16.0).unwrap();
    // 4π·9 ≈ 113 initially; the focusing of the kick quickly overflows
    let s = KgState::at_rest(gaussian(grid, 3.0, 0.5)).unwrap();
    let res = evolve(
        &s,
        1.0,
        EvolveParams {
            dt: 0.01,
            dt_save: 0.1,
            nonlinearity: Nonlinearity::Exponential,
        },
    );
    match res {
        Ok(traj) => {
            assert!(traj.is_truncated());
            assert!(traj.len() < 11);
        }
        Err(e) => panic!("expected a truncated trajectory, got {e}"),
    }
}

#[test]
fn finite_propagation_speed() {
    // compactly supported bump of radius 4; after t = 3 the energy outside
    // |x| <= 7 is negligible
    let grid = Grid::new(512, 40.0).unwrap();
    let bump = |r2: f64| if r2 < 16.0 { 0.2 * (1.0 - 16.0 / (16.0 - r2)).exp() } else { 0.0 };
    let s = KgState::at_rest(Field::from_real_fn(grid, |x, y| bump(x * x + y * y))).unwrap();
    let out = free_kg(&s, 3.0);
    let dens = kgsl::diagnostics::energy_densities(&out, Nonlinearity::Off).unwrap();
    let mut outside = 0.0;
    let mut total = 0.0;
    for (idx, d) in dens.linear.values().iter().enumerate() {
        let (x, y) = grid.point(idx);
        total += d.re;
        if (x * x + y * y).sqrt() > 7.0 + 2.0 * grid.spacing() {
            outside += d.re;
        }
    }
    assert!(outside / total < 1e-8, "fraction outside light cone {}", outside / total);
}
