//! Norm evaluation for single fields and for sampled trajectories.

use super::dyadic::for_each_block;
use super::field::Field;
use super::local::DiskIntegrator;
use super::spectral::{gradient, gradient_density};
use crate::error::{LabError, Result};
use crate::scalar::Real;

/// Besov regularity indices accepted by [`norm`].
///
/// Outside this range the low block, which carries weight one, no longer
/// controls the norm on the periodic box.
pub const BESOV_SMOOTHNESS_RANGE: (f64, f64) = (-4.0, 4.0);

/// Spatial norms. Exponents use `f64::INFINITY` for `p = ∞`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormSpec {
    /// `‖u‖_{L^p}`.
    Lp { p: f64 },
    /// `‖⟨∇⟩^s u‖_{L^2}`.
    Sobolev { s: f64 },
    /// `‖u‖_{L^q} + ‖∇u‖_{L^q}`.
    SobolevLq { q: f64 },
    /// `‖(2^{js} ‖P_j u‖_{L^p})_j‖_{ℓ^q}` with weight one on the low block.
    Besov { s: f64, p: f64, q: f64 },
    /// `(sup_c ∫_{|x-c|<=R} |∇u|^2 + |u|^2)^{1/2}`, centres on grid points.
    LocalH1 { radius: f64 },
    /// `(‖∇u‖^2 + μ^2 ‖u‖^2)^{1/2}`.
    HMu { mu: f64 },
}

fn check_exponent(name: &str, p: f64) -> Result<()> {
    if p.is_nan() || p < 1.0 {
        return Err(LabError::InvalidNorm(format!("{name} = {p} must lie in [1, ∞]")));
    }
    Ok(())
}

impl NormSpec {
    /// Checks parameters against the norm definitions and the box.
    pub fn validate(&self, box_length: f64) -> Result<()> {
        match *self {
            NormSpec::Lp { p } => check_exponent("p", p),
            NormSpec::Sobolev { s } => {
                if s.is_finite() {
                    Ok(())
                } else {
                    Err(LabError::InvalidNorm(format!("s = {s} must be finite")))
                }
            }
            NormSpec::SobolevLq { q } => check_exponent("q", q),
            NormSpec::Besov { s, p, q } => {
                check_exponent("p", p)?;
                check_exponent("q", q)?;
                let (lo, hi) = BESOV_SMOOTHNESS_RANGE;
                if !(lo..=hi).contains(&s) {
                    return Err(LabError::InvalidNorm(format!(
                        "Besov smoothness s = {s} outside the representable range [{lo}, {hi}]"
                    )));
                }
                Ok(())
            }
            NormSpec::LocalH1 { radius } => {
                if !(radius > 0.0) {
                    return Err(LabError::InvalidNorm(format!("radius {radius} must be positive")));
                }
                if radius >= box_length / 2.0 {
                    return Err(LabError::InvalidNorm(format!(
                        "radius {radius} must be below half the box length {}",
                        box_length / 2.0
                    )));
                }
                Ok(())
            }
            NormSpec::HMu { mu } => {
                if mu > 0.0 && mu <= 1.0 {
                    Ok(())
                } else {
                    Err(LabError::InvalidNorm(format!("mu = {mu} must lie in (0, 1]")))
                }
            }
        }
    }
}

/// `‖u‖_{L^p}` from grid samples of `|u|`.
pub fn lp_of_magnitudes<T: Real>(magnitudes: impl Iterator<Item = T>, cell_area: T, p: f64) -> T {
    if p.is_infinite() {
        return magnitudes.fold(T::zero(), |a, b| a.max(b));
    }
    let pt = T::lit(p);
    let sum: T = magnitudes.map(|m| m.powf(pt)).sum();
    (sum * cell_area).powf(T::one() / pt)
}

pub fn lp_norm<T: Real>(field: &Field<T>, p: f64) -> T {
    lp_of_magnitudes(field.values().iter().map(|c| c.norm()), field.grid().cell_area(), p)
}

/// `‖u‖_{L^2}^2`.
pub fn l2_norm_sq<T: Real>(field: &Field<T>) -> T {
    field.integrate(|c| c.norm_sqr())
}

/// `‖∇u‖_{L^2}^2` by Parseval.
pub fn gradient_norm_sq<T: Real>(field: &Field<T>) -> T {
    field.transform().weighted_l2_sq(|a, b| a * a + b * b)
}

/// `‖a - b‖_{L^2} / ‖b‖_{L^2}`, or `‖a‖_{L^2}` when `b` vanishes.
pub fn relative_l2_error<T: Real>(a: &Field<T>, b: &Field<T>) -> T {
    let diff: T = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    let base: T = b.values().iter().map(|y| y.norm_sqr()).sum();
    if base == T::zero() {
        diff.sqrt() * a.grid().spacing()
    } else {
        (diff / base).sqrt()
    }
}

/// Combines a sequence of nonnegative terms in `ℓ^q`.
fn lq_combine<T: Real>(terms: &[T], q: f64) -> T {
    if q.is_infinite() {
        return terms.iter().fold(T::zero(), |a, &b| a.max(b));
    }
    let qt = T::lit(q);
    terms.iter().map(|t| t.powf(qt)).sum::<T>().powf(T::one() / qt)
}

/// Evaluates `spec` on `field`.
pub fn norm<T: Real>(field: &Field<T>, spec: NormSpec) -> Result<T> {
    let grid = field.grid();
    spec.validate(grid.length().as_f64())?;
    Ok(match spec {
        NormSpec::Lp { p } => lp_norm(field, p),
        NormSpec::Sobolev { s } => {
            let s = T::lit(s);
            field
                .transform()
                .weighted_l2_sq(|a, b| (T::one() + a * a + b * b).powf(s))
                .sqrt()
        }
        NormSpec::SobolevLq { q } => {
            let (g1, g2) = gradient(field);
            let grad = g1
                .values()
                .iter()
                .zip(g2.values())
                .map(|(a, b)| (a.norm_sqr() + b.norm_sqr()).sqrt());
            lp_norm(field, q) + lp_of_magnitudes(grad, grid.cell_area(), q)
        }
        NormSpec::Besov { s, p, q } => {
            let mut terms = Vec::new();
            for_each_block(field, |j, block| {
                let weight = if j < 0 { 1.0 } else { 2f64.powf(j as f64 * s) };
                terms.push(T::lit(weight) * lp_norm(&block, p));
            });
            lq_combine(&terms, q)
        }
        NormSpec::LocalH1 { radius } => {
            let density = local_h1_density(field);
            let integrator = DiskIntegrator::new(grid, &density);
            integrator.max_disk_integral(T::lit(radius)).0.max(T::zero()).sqrt()
        }
        NormSpec::HMu { mu } => {
            let mu2 = T::lit(mu * mu);
            field.transform().weighted_l2_sq(|a, b| a * a + b * b + mu2).sqrt()
        }
    })
}

/// Pointwise `|∇u|^2 + |u|^2`.
pub fn local_h1_density<T: Real>(field: &Field<T>) -> Vec<T> {
    let mut density = gradient_density(field);
    for (d, v) in density.iter_mut().zip(field.values()) {
        *d = *d + v.norm_sqr();
    }
    density
}

/// A mixed norm `L^p_t(Z)` where `Z` is the intersection of `members`.
///
/// The spatial norm of an intersection is the largest member norm.
#[derive(Clone, Debug, PartialEq)]
pub struct SpaceTimeNorm {
    pub time_exponent: f64,
    pub members: Vec<NormSpec>,
}

impl SpaceTimeNorm {
    pub fn new(time_exponent: f64, members: Vec<NormSpec>) -> Self {
        Self { time_exponent, members }
    }

    /// `L^8_t L^16_x`.
    pub fn x() -> Self {
        Self::new(8.0, vec![NormSpec::Lp { p: 16.0 }])
    }

    /// `L^4_t (B^{1/4}_{∞,2} ∩ B^{1/2}_{4,2})`.
    pub fn k() -> Self {
        Self::new(
            4.0,
            vec![
                NormSpec::Besov { s: 0.25, p: f64::INFINITY, q: 2.0 },
                NormSpec::Besov { s: 0.5, p: 4.0, q: 2.0 },
            ],
        )
    }

    /// `L^∞_t B^{-1/4}_{∞,∞}`.
    pub fn b() -> Self {
        Self::new(
            f64::INFINITY,
            vec![NormSpec::Besov { s: -0.25, p: f64::INFINITY, q: f64::INFINITY }],
        )
    }

    /// `L^∞_t H^1`.
    pub fn h() -> Self {
        Self::new(f64::INFINITY, vec![NormSpec::Sobolev { s: 1.0 }])
    }

    /// `L^∞_t H^1[6]`.
    pub fn h_loc() -> Self {
        Self::new(f64::INFINITY, vec![NormSpec::LocalH1 { radius: 6.0 }])
    }

    /// `L^{1/δ}_t L^{2/δ}_x`.
    pub fn y1(delta: f64) -> Self {
        Self::new(1.0 / delta, vec![NormSpec::Lp { p: 2.0 / delta }])
    }

    /// `L^{4/(1-δ)}_t (C^{1/4-δ} ∩ L^8)`, with `C^σ = B^σ_{∞,∞}`.
    pub fn y2(delta: f64) -> Self {
        Self::new(
            4.0 / (1.0 - delta),
            vec![
                NormSpec::Besov { s: 0.25 - delta, p: f64::INFINITY, q: f64::INFINITY },
                NormSpec::Lp { p: 8.0 },
            ],
        )
    }

    /// `L^4_t L^8_x`.
    pub fn l4l8() -> Self {
        Self::new(4.0, vec![NormSpec::Lp { p: 8.0 }])
    }

    /// `L^∞_t H^1 ∩ L^4_t H^{1,4}`, evaluated as the sum of the two parts.
    pub fn s1_parts() -> [Self; 2] {
        [Self::h(), Self::new(4.0, vec![NormSpec::SobolevLq { q: 4.0 }])]
    }

    pub fn validate(&self, box_length: f64) -> Result<()> {
        check_exponent("time exponent", self.time_exponent)?;
        if self.members.is_empty() {
            return Err(LabError::InvalidNorm("space-time norm without spatial members".into()));
        }
        self.members.iter().try_for_each(|m| m.validate(box_length))
    }

    /// Spatial norm of one snapshot.
    pub fn spatial<T: Real>(&self, field: &Field<T>) -> Result<T> {
        let mut best = T::zero();
        for &m in &self.members {
            best = best.max(norm(field, m)?);
        }
        Ok(best)
    }

    /// Evaluates the mixed norm over snapshots spaced `dt` apart.
    pub fn evaluate<'a, T: Real + 'a>(&self, snapshots: impl IntoIterator<Item = &'a Field<T>>, dt: T) -> Result<T> {
        let mut values = Vec::new();
        for f in snapshots {
            values.push(self.spatial(f)?);
        }
        time_norm(&values, dt, self.time_exponent)
    }
}

/// `(∫ g(t)^p dt)^{1/p}` by composite trapezoid, or `max g` for `p = ∞`.
pub fn time_norm<T: Real>(values: &[T], dt: T, p: f64) -> Result<T> {
    if values.is_empty() {
        return Err(LabError::Trajectory("no snapshots to integrate".into()));
    }
    if p.is_infinite() {
        return Ok(values.iter().fold(T::zero(), |a, &b| a.max(b)));
    }
    if values.len() < 2 {
        return Err(LabError::Trajectory("a time integral needs at least two snapshots".into()));
    }
    let pt = T::lit(p);
    let powers: Vec<T> = values.iter().map(|v| v.powf(pt)).collect();
    let last = powers.len() - 1;
    let interior: T = powers[1..last].iter().copied().sum();
    let integral = dt * (interior + (powers[0] + powers[last]) / T::lit(2.0));
    Ok(integral.powf(T::one() / pt))
}

/// Cumulative `(∫_0^{t_k} g^p dt)^{1/p}` for every snapshot index `k`.
pub fn cumulative_time_norm<T: Real>(values: &[T], dt: T, p: f64) -> Vec<T> {
    let pt = T::lit(p);
    let mut out = Vec::with_capacity(values.len());
    let mut acc = T::zero();
    let mut running_max = T::zero();
    for (k, &v) in values.iter().enumerate() {
        if p.is_infinite() {
            running_max = running_max.max(v);
            out.push(running_max);
            continue;
        }
        if k > 0 {
            acc = acc + dt * (values[k - 1].powf(pt) + v.powf(pt)) / T::lit(2.0);
        }
        out.push(acc.powf(T::one() / pt));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::grid::Grid;
    use num_complex::Complex;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gaussian(n: usize, length: f64) -> Field<f64> {
        Field::from_real_fn(Grid::new(n, length).unwrap(), |x, y| (-(x * x + y * y)).exp())
    }

    fn random_smooth(seed: u64) -> Field<f64> {
        let grid = Grid::new(64, 20.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bumps: Vec<(f64, f64, f64)> = (0..6)
            .map(|_| (rng.gen_range(-6.0..6.0), rng.gen_range(-6.0..6.0), rng.gen_range(-1.0..1.0)))
            .collect();
        Field::from_real_fn(grid, |x, y| {
            bumps
                .iter()
                .map(|&(cx, cy, a)| a * (-((x - cx).powi(2) + (y - cy).powi(2))).exp())
                .sum()
        })
    }

    #[test]
    fn gaussian_l2() {
        let g = gaussian(128, 16.0);
        let v = norm(&g, NormSpec::Lp { p: 2.0 }).unwrap();
        assert!((v * v - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
        let h1 = norm(&g, NormSpec::Sobolev { s: 1.0 }).unwrap();
        // ‖∇g‖^2 = π for exp(-|x|^2)
        assert!((h1 * h1 - std::f64::consts::FRAC_PI_2 - std::f64::consts::PI).abs() < 1e-6);
        let hmu = norm(&g, NormSpec::HMu { mu: 1.0 }).unwrap();
        assert!((hmu - h1).abs() < 1e-12);
    }

    #[test]
    fn local_h1_is_monotone_and_saturates() {
        let f = random_smooth(3);
        let total = norm(&f, NormSpec::Sobolev { s: 1.0 }).unwrap();
        let mut prev = 0.0;
        for r in [0.5, 1.0, 2.0, 4.0, 8.0, 9.99] {
            let v = norm(&f, NormSpec::LocalH1 { radius: r }).unwrap();
            assert!(v >= prev - 1e-12, "radius {r}: {v} < {prev}");
            assert!(v <= total * (1.0 + 1e-10));
            prev = v;
        }
        // the disk of radius just under L/2 misses only the far corners
        assert!(prev > 0.95 * total);
    }

    #[test]
    fn local_h1_translation_invariant() {
        let f = random_smooth(4);
        let base = norm(&f, NormSpec::LocalH1 { radius: 3.0 }).unwrap();
        for (di, dj) in [(5, 0), (0, -9), (17, 33)] {
            let v = norm(&f.shifted(di, dj), NormSpec::LocalH1 { radius: 3.0 }).unwrap();
            assert!((v - base).abs() < 1e-10 * base);
        }
    }

    #[test]
    fn local_h1_rejects_large_radius() {
        let f = random_smooth(5);
        assert!(norm(&f, NormSpec::LocalH1 { radius: 10.0 }).is_err());
    }

    #[test]
    fn besov_rejects_out_of_range() {
        let f = random_smooth(6);
        assert!(norm(&f, NormSpec::Besov { s: -5.0, p: 2.0, q: 2.0 }).is_err());
        assert!(norm(&f, NormSpec::Besov { s: 0.0, p: 0.5, q: 2.0 }).is_err());
    }

    #[test]
    fn besov_single_mode_bounds() {
        let grid = Grid::new(64, 2.0 * std::f64::consts::PI).unwrap();
        for k in [1isize, 3, 6, 13, 25] {
            let xi = k as f64;
            let mode = Field::from_fn(grid, |x, _| Complex::from_polar(1.0, xi * x));
            for s in [-0.5, 0.25, 1.0] {
                let b = norm(&mode, NormSpec::Besov { s, p: f64::INFINITY, q: 2.0 }).unwrap();
                let scale = (1.0 + xi * xi).powf(s / 2.0);
                // at most two blocks see the mode, with cutoffs summing to one
                // and weights within a factor 2^{2|s|} of <xi>^s
                let c = 2f64.powf(-2.0 * s.abs()) / 2f64.sqrt();
                let upper = 2f64.powf(2.0 * s.abs());
                assert!(b >= c * scale && b <= upper * scale, "k={k} s={s} b={b} scale={scale}");
            }
        }
    }

    #[test]
    fn besov_q_monotone() {
        for seed in 0..4 {
            let f = random_smooth(seed);
            let mut prev = f64::INFINITY;
            for q in [1.0, 2.0, 4.0, f64::INFINITY] {
                let v = norm(&f, NormSpec::Besov { s: 0.5, p: 4.0, q }).unwrap();
                assert!(v <= prev * (1.0 + 1e-12));
                prev = v;
            }
        }
    }

    #[test]
    fn constant_trajectory_scales_with_length() {
        let f = random_smooth(7);
        let snaps = vec![f.clone(); 11];
        let dt = 0.3;
        let spatial = norm(&f, NormSpec::Lp { p: 16.0 }).unwrap();
        let x = SpaceTimeNorm::x().evaluate(&snaps, dt).unwrap();
        let t = dt * 10.0;
        assert!((x - t.powf(1.0 / 8.0) * spatial).abs() < 1e-12 * x);
        let zero = vec![Field::zeros(f.grid()); 3];
        assert_eq!(SpaceTimeNorm::x().evaluate(&zero, dt).unwrap(), 0.0);
        let empty: Vec<Field<f64>> = Vec::new();
        assert!(SpaceTimeNorm::x().evaluate(&empty, dt).is_err());
    }

    #[test]
    fn cumulative_matches_total() {
        let values = [0.1_f64, 0.5, 0.7, 0.2, 0.05];
        let c = cumulative_time_norm(&values, 0.5, 4.0);
        let t = time_norm(&values, 0.5, 4.0).unwrap();
        assert!((c[4] - t).abs() < 1e-15);
        assert_eq!(c[0], 0.0);
    }
}
