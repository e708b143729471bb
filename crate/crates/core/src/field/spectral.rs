//! Fourier multipliers: derivatives, `<grad>^s`, Laplacian and friends.

use num_complex::Complex;

use super::field::{Field, Spectrum};
use crate::scalar::Real;

/// Applies `symbol(xi)` in Fourier space and returns to physical space.
///
/// The result is flagged real only when the input is real and the caller
/// declares the symbol even and real via [`spectral_multiplier_real`].
pub fn spectral_multiplier<T: Real>(field: &Field<T>, symbol: impl Fn(T, T) -> Complex<T>) -> Field<T> {
    let mut spec = field.transform();
    spec.apply(symbol);
    spec.into_field()
}

/// Multiplier with a real symbol even in `xi`; real inputs stay real.
pub fn spectral_multiplier_real<T: Real>(field: &Field<T>, symbol: impl Fn(T, T) -> T) -> Field<T> {
    let out = spectral_multiplier(field, |a, b| Complex::new(symbol(a, b), T::zero()));
    if field.is_real() {
        out.into_real_part()
    } else {
        out
    }
}

/// Japanese bracket `sqrt(1 + |xi|^2)`.
#[inline]
pub fn bracket<T: Real>(xi1: T, xi2: T) -> T {
    (T::one() + xi1 * xi1 + xi2 * xi2).sqrt()
}

/// Bessel potential `<grad>^s`.
pub fn bessel_potential<T: Real>(field: &Field<T>, s: T) -> Field<T> {
    spectral_multiplier_real(field, |a, b| bracket(a, b).powf(s))
}

pub fn laplacian<T: Real>(field: &Field<T>) -> Field<T> {
    spectral_multiplier_real(field, |a, b| -(a * a + b * b))
}

/// Spectral gradient `(d/dx1, d/dx2)`.
///
/// Nyquist bins are dropped from the derivative along their own axis, which
/// keeps derivatives of real fields real.
pub fn gradient<T: Real>(field: &Field<T>) -> (Field<T>, Field<T>) {
    gradient_of_spectrum(&field.transform(), field.is_real())
}

pub fn gradient_of_spectrum<T: Real>(spec: &Spectrum<T>, real: bool) -> (Field<T>, Field<T>) {
    let grid = spec.grid();
    let n = grid.n();
    let mut d1 = spec.clone();
    let mut d2 = spec.clone();
    for i in 0..n {
        let xi1 = if grid.is_nyquist(i) { T::zero() } else { grid.frequency(i) };
        for j in 0..n {
            let xi2 = if grid.is_nyquist(j) { T::zero() } else { grid.frequency(j) };
            let idx = i * n + j;
            d1.coeffs_mut()[idx] = spec.coeffs()[idx] * Complex::new(T::zero(), xi1);
            d2.coeffs_mut()[idx] = spec.coeffs()[idx] * Complex::new(T::zero(), xi2);
        }
    }
    let (g1, g2) = (d1.into_field(), d2.into_field());
    if real {
        (g1.into_real_part(), g2.into_real_part())
    } else {
        (g1, g2)
    }
}

/// `|grad u|^2` sampled on the grid.
pub fn gradient_density<T: Real>(field: &Field<T>) -> Vec<T> {
    let (g1, g2) = gradient(field);
    g1.values()
        .iter()
        .zip(g2.values())
        .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
        .collect()
}

/// Projection onto `max(|k1|, |k2|) <= cutoff` in integer wavenumbers.
pub fn box_low_pass<T: Real>(spec: &Spectrum<T>, cutoff: usize) -> Spectrum<T> {
    let grid = spec.grid();
    let n = grid.n();
    let mut out = spec.clone();
    for i in 0..n {
        for j in 0..n {
            let k = grid.wavenumber(i).unsigned_abs().max(grid.wavenumber(j).unsigned_abs());
            if k > cutoff {
                out.coeffs_mut()[i * n + j] = Complex::new(T::zero(), T::zero());
            }
        }
    }
    out
}

/// Fraction `||P_{>n/3} u|| / ||u||` of the spectrum beyond a third of the band.
pub fn spectral_tail_fraction<T: Real>(spec: &Spectrum<T>) -> T {
    let grid = spec.grid();
    let n = grid.n();
    let cutoff = n / 3;
    let mut tail = T::zero();
    let mut total = T::zero();
    for i in 0..n {
        for j in 0..n {
            let k = grid.wavenumber(i).unsigned_abs().max(grid.wavenumber(j).unsigned_abs());
            let e = spec.coeffs()[i * n + j].norm_sqr();
            total = total + e;
            if k > cutoff {
                tail = tail + e;
            }
        }
    }
    if total == T::zero() {
        T::zero()
    } else {
        (tail / total).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::grid::Grid;
    use crate::field::norms::relative_l2_error;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(grid: Grid<f64>, seed: u64) -> Field<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..grid.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Field::real(grid, values).unwrap()
    }

    #[test]
    fn identity_symbol_is_identity() {
        let grid = Grid::new(32, 5.0).unwrap();
        let f = random_field(grid, 1);
        let g = spectral_multiplier(&f, |_, _| Complex::new(1.0, 0.0));
        assert!(relative_l2_error(&g, &f) < 1e-14);
    }

    #[test]
    fn laplacian_of_plane_wave() {
        let grid = Grid::new(32, 3.0).unwrap();
        let xi = 2.0 * std::f64::consts::PI / 3.0;
        let wave = Field::from_fn(grid, |x, _| Complex::from_polar(1.0, xi * x));
        let lap = laplacian(&wave);
        let expected = wave.scaled(-xi * xi);
        assert!(relative_l2_error(&lap, &expected) < 1e-12);
    }

    #[test]
    fn bracket_twice_is_one_minus_laplacian() {
        let grid = Grid::new(64, 10.0).unwrap();
        let f = random_field(grid, 7);
        let twice = bessel_potential(&bessel_potential(&f, 1.0), 1.0);
        let once = f.sub(&laplacian(&f)).unwrap();
        assert!(relative_l2_error(&twice, &once) < 1e-10);
    }

    #[test]
    fn gradient_of_sine_is_cosine() {
        let grid = Grid::new(64, 2.0 * std::f64::consts::PI).unwrap();
        let f = Field::from_real_fn(grid, |x, y| (3.0 * x).sin() * (2.0 * y).cos());
        let (gx, gy) = gradient(&f);
        let ex = Field::from_real_fn(grid, |x, y| 3.0 * (3.0 * x).cos() * (2.0 * y).cos());
        let ey = Field::from_real_fn(grid, |x, y| -2.0 * (3.0 * x).sin() * (2.0 * y).sin());
        assert!(relative_l2_error(&gx, &ex) < 1e-12);
        assert!(relative_l2_error(&gy, &ey) < 1e-12);
        assert!(gx.is_real());
    }

    #[test]
    fn tail_fraction_of_smooth_field_is_tiny() {
        let grid = Grid::new(128, 20.0_f64).unwrap();
        let f = Field::from_real_fn(grid, |x, y| (-(x * x + y * y)).exp());
        assert!(spectral_tail_fraction(&f.transform()) < 1e-12);
        let rough = random_field(grid, 3);
        assert!(spectral_tail_fraction(&rough.transform()) > 0.1);
    }
}
