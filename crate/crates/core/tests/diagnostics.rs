use kgsl::diagnostics::{
    chi, chi_laplacian, chi_prime, concentration_radius, covering_min_max, cubic_l2_ratio, energy_report,
    h1_cutoff_identity_check, lipschitz_probe, morawetz_density, q_density, ConcentrationProbe, CubicDecomposition,
    Radius,
};
use kgsl::field::norms::gradient_norm_sq;
use kgsl::field::spectral::gradient;
use kgsl::field::{Field, Grid};
use kgsl::nonlinearity::Nonlinearity;
use kgsl::Grid2D;
use kgsl::propagators::{evolve, EvolveParams, KgState, NlsState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_bumps(grid: Grid<f64>, rng: &mut ChaCha8Rng, count: usize, spread: f64, amp: f64) -> Field<f64> {
    let bumps: Vec<(f64, f64, f64, f64)> = (0..count)
        .map(|_| {
            (
                rng.gen_range(-spread..spread),
                rng.gen_range(-spread..spread),
                rng.gen_range(-amp..amp),
                rng.gen_range(0.7..1.5),
            )
        })
        .collect();
    Field::from_real_fn(grid, |x, y| {
        bumps
            .iter()
            .map(|&(cx, cy, a, w)| a * (-((x - cx).powi(2) + (y - cy).powi(2)) / (w * w)).exp())
            .sum()
    })
}

#[test]
fn zero_state_has_zero_energy() {
    let grid = Grid2D::new(32, 10.0).unwrap();
    let s = KgState::at_rest(Field::zeros(grid)).unwrap();
    let e = energy_report(&s, Nonlinearity::Exponential).unwrap();
    assert_eq!(e.energy, 0.0);
    assert_eq!(e.free_energy, 0.0);
    assert_eq!(e.potential, 0.0);
}

#[test]
fn plane_wave_free_energy() {
    let length = 10.0;
    let grid = Grid2D::new(64, length).unwrap();
    let (k1, k2) = (2.0 * std::f64::consts::PI * 3.0 / length, 2.0 * std::f64::consts::PI * -1.0 / length);
    let xi2 = k1 * k1 + k2 * k2;
    let w = (1.0 + xi2).sqrt();
    let amp = 0.01;
    let u = Field::from_real_fn(grid, |x, y| amp * (k1 * x + k2 * y).cos());
    let udot = Field::from_real_fn(grid, |x, y| amp * w * (k1 * x + k2 * y).sin());
    let s = KgState::new(u, udot, 0.0).unwrap();
    let e = energy_report(&s, Nonlinearity::Exponential).unwrap();
    let expected = amp * amp * length * length * (1.0 + xi2);
    assert!(((e.free_energy - expected) / expected).abs() < 1e-10);
    assert!(e.energy >= e.free_energy);
}

#[test]
fn potential_is_nonnegative_on_random_data() {
    let grid = Grid2D::new(64, 20.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let u = random_bumps(grid, &mut rng, 5, 6.0, 0.5);
        let s = NlsState::new(u, 0.0);
        let e = energy_report(&s, Nonlinearity::Exponential).unwrap();
        assert!(e.potential >= 0.0);
        assert!((e.energy - e.hamiltonian - e.mass).abs() < 1e-12 * e.energy);
    }
}

#[test]
fn single_hot_cell() {
    let grid = Grid2D::new(64, 16.0).unwrap();
    let mut density = vec![0.0; grid.len()];
    density[grid.index(20, 33)] = 1.0;
    let probe = ConcentrationProbe::from_density(grid, &density, 0.0);
    let total = probe.total();
    let rec = probe.radius(0.5 * total, grid.spacing() / 16.0).unwrap();
    let r = rec.radius.finite().unwrap();
    assert!(r <= 2.0 * grid.spacing());
    assert_eq!(rec.center, Some(grid.point(grid.index(20, 33))));
    assert_eq!(probe.radius(total * 1.01, 0.1).unwrap().radius, Radius::Infinite);
}

/// Smallest radius at which some grid-centred hard disk holds more than `amount`.
fn brute_force_radius(grid: Grid<f64>, density: &[f64], amount: f64, tol: f64) -> f64 {
    let n = grid.n();
    let h = grid.spacing();
    let length = grid.length();
    let holds = |r: f64| {
        let reach = (r / h).ceil() as isize + 1;
        for ci in 0..n {
            for cj in 0..n {
                let mut sum = 0.0;
                for di in -reach..=reach {
                    for dj in -reach..=reach {
                        let dx = di as f64 * h;
                        let dy = dj as f64 * h;
                        if dx * dx + dy * dy < r * r {
                            let i = (ci as isize + di).rem_euclid(n as isize) as usize;
                            let j = (cj as isize + dj).rem_euclid(n as isize) as usize;
                            sum += density[i * n + j];
                        }
                    }
                }
                if sum * h * h > amount {
                    return true;
                }
            }
        }
        false
    };
    let (mut lo, mut hi) = (0.0, length / 2.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[test]
fn two_bumps_match_brute_force() {
    let grid = Grid2D::new(32, 16.0).unwrap();
    let h = grid.spacing();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..3 {
        let sep = rng.gen_range(4.0..6.0);
        let angle: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let (dx, dy) = (0.5 * sep * angle.cos(), 0.5 * sep * angle.sin());
        let density: Vec<f64> = (0..grid.len())
            .map(|idx| {
                let (x, y) = grid.point(idx);
                let a = (-((x - dx).powi(2) + (y - dy).powi(2)) * 2.0).exp();
                let b = (-((x + dx).powi(2) + (y + dy).powi(2)) * 2.0).exp();
                a + b
            })
            .collect();
        let probe = ConcentrationProbe::from_density(grid, &density, 0.0);
        let one = probe.total() / 2.0;
        for amount in [0.9 * one, 1.1 * one] {
            let fast = probe.radius(amount, h / 8.0).unwrap().radius.finite().unwrap();
            let slow = brute_force_radius(grid, &density, amount, h / 8.0);
            assert!((fast - slow).abs() <= h, "amount {amount}: {fast} vs {slow}");
        }
        let below = probe.radius(0.9 * one, h / 8.0).unwrap().radius.finite().unwrap();
        let above = probe.radius(1.1 * one, h / 8.0).unwrap().radius.finite().unwrap();
        assert!(above > below + 1.0, "radius jumps to cover both bumps");
    }
}

#[test]
fn radius_nondecreasing_in_amount() {
    let grid = Grid2D::new(64, 20.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let u = random_bumps(grid, &mut rng, 4, 5.0, 0.4);
    let s = KgState::at_rest(u).unwrap();
    let probe = ConcentrationProbe::new(&s, Nonlinearity::Exponential).unwrap();
    let total = probe.total();
    let mut prev = 0.0;
    for k in 1..10 {
        let r = probe.radius(total * k as f64 / 10.0, 1e-3).unwrap().radius.as_f64();
        assert!(r >= prev - 1e-3);
        prev = r;
    }
}

#[test]
fn lipschitz_probe_preconditions() {
    let grid = Grid2D::new(32, 16.0).unwrap();
    let u = Field::from_real_fn(grid, |x, y| 0.2 * (-(x * x + y * y)).exp());
    let params = EvolveParams {
        dt: 0.01,
        dt_save: 0.1,
        nonlinearity: Nonlinearity::Exponential,
    };
    let kg = evolve(&KgState::at_rest(u.clone()).unwrap(), 0.0, params).unwrap();
    let rep = lipschitz_probe(&kg, 0.1, grid.spacing()).unwrap();
    assert_eq!(rep.max_ratio, 0.0);
    let nls = evolve(&NlsState::new(u, 0.0), 0.0, params).unwrap();
    assert!(lipschitz_probe(&nls, 0.1, grid.spacing()).is_err());
    let single = concentration_radius(&KgState::at_rest(Field::zeros(grid)).unwrap(), Nonlinearity::Off, 1.0, 0.1);
    assert_eq!(single.unwrap().radius, Radius::Infinite);
}

#[test]
fn q_and_morawetz_densities_are_nonnegative() {
    let grid = Grid2D::new(64, 20.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let u = random_bumps(grid, &mut rng, 4, 5.0, 0.4);
        let v = random_bumps(grid, &mut rng, 4, 5.0, 0.4);
        let s = KgState::new(u, v, 1.7).unwrap();
        let q = q_density(&s).unwrap();
        assert!(q.re().iter().all(|&x| x >= 0.0));
        let m = morawetz_density(&s, Nonlinearity::Exponential).unwrap();
        assert!(m.re().iter().all(|&x| x >= 0.0));
    }
    let s = KgState::at_rest(Field::zeros(grid)).unwrap();
    assert!(q_density(&s).is_err());
}

#[test]
fn radial_state_has_no_angular_momentum_density() {
    let grid = Grid2D::new(64, 20.0).unwrap();
    let u = Field::from_real_fn(grid, |x, y| (-(x * x + y * y) / 2.0).exp());
    let (gx, gy) = gradient(&u);
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for idx in 0..grid.len() {
        let (x, y) = grid.point(idx);
        let cross = x * gy.values()[idx].re - y * gx.values()[idx].re;
        worst = worst.max(cross * cross);
        scale = scale.max((x * x + y * y) * (gx.values()[idx].norm_sqr() + gy.values()[idx].norm_sqr()));
    }
    assert!(worst <= 1e-10 * scale, "{worst} vs {scale}");
}

#[test]
fn cutoff_values_and_bounds() {
    let expected = [(0.0, 1.0), (3.0, 0.875), (4.0, 0.5), (5.0, 0.125), (6.0, 0.0)];
    for (r, v) in expected {
        let (r, v): (f64, f64) = (r, v);
        assert!((chi(r) - v).abs() < 1e-12);
    }
    let mut max_grad: f64 = 0.0;
    let mut max_lap: f64 = 0.0;
    for i in 0..=600_000 {
        let r = i as f64 * 1e-5;
        max_grad = max_grad.max(chi_prime(r).abs());
        max_lap = max_lap.max(chi_laplacian(r).abs());
    }
    assert!(max_grad <= 0.5 + 1e-9);
    assert!(max_lap <= 0.375 + 1e-9);
}

#[test]
fn cubic_covering_and_l2_ratio() {
    let grid = Grid2D::new(64, 24.0).unwrap();
    assert_eq!(covering_min_max(grid), 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..5 {
        let f = random_bumps(grid, &mut rng, 5, 8.0, 1.0);
        let ratio = cubic_l2_ratio(&f);
        assert!((1.0..=10.0).contains(&ratio), "ratio {ratio}");
        let dec = CubicDecomposition::new(&f);
        let direct: f64 = dec.pieces().map(|(_, p)| p.integrate(|c| c.norm_sqr())).sum::<f64>()
            / f.integrate(|c| c.norm_sqr());
        assert!((direct - ratio).abs() < 1e-12 * ratio);
    }
}

#[test]
fn h1_cutoff_identity() {
    let grid = Grid2D::new(64, 24.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..3 {
        let f = random_bumps(grid, &mut rng, 5, 6.0, 1.0);
        let c = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let res = h1_cutoff_identity_check(&f, c).unwrap();
        assert!(res <= 1e-6, "residual {res}");
    }
    // φ inside the plateau: both sides are ‖∇φ‖^2
    let inside = Field::from_real_fn(grid, |x, y| (-(x * x + y * y) * 8.0).exp());
    assert!(h1_cutoff_identity_check(&inside, (0.0, 0.0)).unwrap() <= 1e-10);
    assert!(gradient_norm_sq(&inside) > 0.0);
    // constant φ: ‖∇ψ‖^2 = -∫ψΔψ
    let one = Field::from_real_fn(grid, |_, _| 1.0);
    assert!(h1_cutoff_identity_check(&one, (0.3, -0.2)).unwrap() <= 1e-10);
}
