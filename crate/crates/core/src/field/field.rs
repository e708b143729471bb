use num_complex::Complex;

use super::fft::Fft2;
use super::grid::Grid;
use crate::error::{LabError, Result};
use crate::scalar::Real;

/// Relative size of imaginary parts tolerated by a field flagged as real.
pub const REAL_TOLERANCE: f64 = 1e-12;

/// Complex samples of a function on the periodic grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Field<T: Real> {
    grid: Grid<T>,
    values: Vec<Complex<T>>,
    real: bool,
}

impl<T: Real> Field<T> {
    pub fn zeros(grid: Grid<T>) -> Self {
        Self {
            grid,
            values: vec![Complex::new(T::zero(), T::zero()); grid.len()],
            real: true,
        }
    }

    /// Wraps complex samples; the field is not flagged as real.
    pub fn complex(grid: Grid<T>, values: Vec<Complex<T>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::SampleCount {
                got: values.len(),
                expected: grid.len(),
            });
        }
        Ok(Self {
            grid,
            values,
            real: false,
        })
    }

    pub fn real(grid: Grid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::SampleCount {
                got: values.len(),
                expected: grid.len(),
            });
        }
        Ok(Self {
            grid,
            values: values.into_iter().map(|v| Complex::new(v, T::zero())).collect(),
            real: true,
        })
    }

    pub fn from_fn(grid: Grid<T>, f: impl Fn(T, T) -> Complex<T>) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                let (x, y) = grid.point(idx);
                f(x, y)
            })
            .collect();
        Self {
            grid,
            values,
            real: false,
        }
    }

    pub fn from_real_fn(grid: Grid<T>, f: impl Fn(T, T) -> T) -> Self {
        let values = (0..grid.len())
            .map(|idx| {
                let (x, y) = grid.point(idx);
                Complex::new(f(x, y), T::zero())
            })
            .collect();
        Self {
            grid,
            values,
            real: true,
        }
    }

    #[inline]
    pub fn grid(&self) -> Grid<T> {
        self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex<T>> {
        self.values
    }

    #[inline]
    pub fn is_real(&self) -> bool {
        self.real
    }

    /// Real parts of the samples.
    pub fn re(&self) -> Vec<T> {
        self.values.iter().map(|c| c.re).collect()
    }

    pub fn max_abs(&self) -> T {
        self.values
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| a.max(b))
    }

    pub fn max_imag(&self) -> T {
        self.values
            .iter()
            .map(|c| num_traits::Float::abs(c.im))
            .fold(T::zero(), |a, b| a.max(b))
    }

    /// Checks the real-field tolerance and zeroes the imaginary parts.
    pub fn try_into_real(mut self) -> Result<Self> {
        let imag = self.max_imag();
        let magnitude = self.max_abs();
        if imag > T::lit(REAL_TOLERANCE) * magnitude {
            return Err(LabError::NotReal {
                imag: imag.as_f64(),
                magnitude: magnitude.as_f64(),
            });
        }
        for v in &mut self.values {
            v.im = T::zero();
        }
        self.real = true;
        Ok(self)
    }

    /// Drops the imaginary parts unconditionally.
    pub fn into_real_part(mut self) -> Self {
        for v in &mut self.values {
            v.im = T::zero();
        }
        self.real = true;
        self
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
            real: false,
        }
    }

    /// Pointwise map that keeps real fields real.
    pub fn map_real(&self, f: impl Fn(T) -> T) -> Self {
        Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .map(|v| Complex::new(f(v.re), T::zero()))
                .collect(),
            real: true,
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Result<Self> {
        self.ensure_same_grid(other)?;
        Ok(Self {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
            real: false,
        })
    }

    pub fn scaled(&self, factor: T) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|&v| v * factor).collect(),
            real: self.real,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.zip_map(other, |a, b| a + b)?;
        out.real = self.real && other.real;
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        let mut out = self.zip_map(other, |a, b| a - b)?;
        out.real = self.real && other.real;
        Ok(out)
    }

    pub fn ensure_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(LabError::GridMismatch);
        }
        Ok(())
    }

    /// Translation by a whole number of cells on the torus.
    pub fn shifted(&self, di: isize, dj: isize) -> Self {
        let n = self.grid.n() as isize;
        let mut values = self.values.clone();
        for i in 0..n {
            for j in 0..n {
                let si = (i + di).rem_euclid(n);
                let sj = (j + dj).rem_euclid(n);
                values[(si * n + sj) as usize] = self.values[(i * n + j) as usize];
            }
        }
        Self {
            grid: self.grid,
            values,
            real: self.real,
        }
    }

    /// Grid quadrature `h^2 sum g(u)` of a pointwise density.
    pub fn integrate(&self, density: impl Fn(Complex<T>) -> T) -> T {
        self.values.iter().map(|&v| density(v)).sum::<T>() * self.grid.cell_area()
    }

    pub fn transform(&self) -> Spectrum<T> {
        self.clone().into_spectrum()
    }

    pub fn into_spectrum(self) -> Spectrum<T> {
        let mut coeffs = self.values;
        Fft2::new(self.grid.n()).forward(&mut coeffs);
        Spectrum {
            grid: self.grid,
            coeffs,
        }
    }

    /// Value at an arbitrary point by trigonometric interpolation.
    pub fn eval_at(&self, x: T, y: T) -> Complex<T> {
        self.transform().eval_at(x, y)
    }
}

/// Unitary discrete Fourier coefficients of a [`Field`].
///
/// With `x0 = -L/2 + h/2` the first sample position, samples are recovered as
/// `u(x_j) = (1/n) sum_k c_k exp(i xi_k . (x_j - x0))`, so the phase of a
/// coefficient is measured relative to the corner sample rather than the
/// origin.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum<T: Real> {
    grid: Grid<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> Spectrum<T> {
    pub fn zeros(grid: Grid<T>) -> Self {
        Self {
            grid,
            coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    pub fn from_coeffs(grid: Grid<T>, coeffs: Vec<Complex<T>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(LabError::SampleCount {
                got: coeffs.len(),
                expected: grid.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    /// Spectrum of the trigonometric polynomial `sum_k a(xi_k) exp(i xi_k . x)`
    /// with the amplitude `a` taken relative to the physical origin.
    pub fn from_fourier_series(grid: Grid<T>, amplitude: impl Fn(T, T) -> Complex<T>) -> Self {
        let n = grid.n();
        let x0 = grid.coord(0);
        let scale = T::from_count(n);
        let freqs = grid.frequencies();
        let mut coeffs = Vec::with_capacity(grid.len());
        for &k1 in &freqs {
            for &k2 in &freqs {
                let a = amplitude(k1, k2);
                if a.re == T::zero() && a.im == T::zero() {
                    coeffs.push(a);
                } else {
                    coeffs.push(a * Complex::from_polar(scale, (k1 + k2) * x0));
                }
            }
        }
        Self { grid, coeffs }
    }

    #[inline]
    pub fn grid(&self) -> Grid<T> {
        self.grid
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    #[inline]
    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    /// Coefficient at integer wavenumber `(k1, k2)`, wrapping modulo `n`.
    pub fn coeff(&self, k1: isize, k2: isize) -> Complex<T> {
        self.coeffs[self.grid.index(self.grid.bin(k1), self.grid.bin(k2))]
    }

    /// Multiplies every coefficient by `symbol(xi_1, xi_2)`.
    pub fn apply(&mut self, symbol: impl Fn(T, T) -> Complex<T>) {
        let n = self.grid.n();
        let freqs = self.grid.frequencies();
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                self.coeffs[idx] = self.coeffs[idx] * symbol(freqs[i], freqs[j]);
            }
        }
    }

    /// Multiplies by a real radial weight `w(|xi|^2)`.
    pub fn apply_radial(&mut self, weight: impl Fn(T) -> T) {
        let n = self.grid.n();
        let freqs = self.grid.frequencies();
        for i in 0..n {
            for j in 0..n {
                let idx = i * n + j;
                self.coeffs[idx] = self.coeffs[idx] * weight(freqs[i] * freqs[i] + freqs[j] * freqs[j]);
            }
        }
    }

    /// Parseval sum `h^2 sum w(xi) |c_k|^2`.
    pub fn weighted_l2_sq(&self, weight: impl Fn(T, T) -> T) -> T {
        let n = self.grid.n();
        let freqs = self.grid.frequencies();
        let mut total = T::zero();
        for i in 0..n {
            for j in 0..n {
                total = total + weight(freqs[i], freqs[j]) * self.coeffs[i * n + j].norm_sqr();
            }
        }
        total * self.grid.cell_area()
    }

    pub fn inverse(&self) -> Field<T> {
        self.clone().into_field()
    }

    pub fn into_field(self) -> Field<T> {
        let mut values = self.coeffs;
        Fft2::new(self.grid.n()).inverse(&mut values);
        Field {
            grid: self.grid,
            values,
            real: false,
        }
    }

    /// Trigonometric interpolant prepared for repeated off-grid evaluation.
    pub fn interpolant(&self, threshold: T) -> TrigInterpolant<T> {
        TrigInterpolant::new(self, threshold)
    }

    pub fn eval_at(&self, x: T, y: T) -> Complex<T> {
        self.interpolant(T::zero()).value(x, y)
    }
}

#[derive(Clone, Copy, Debug)]
struct Mode<T> {
    i: usize,
    j: usize,
    coeff: Complex<T>,
}

/// Off-grid evaluation of the band-limited interpolant of a grid field.
///
/// Nyquist bins are evaluated with a cosine so that real fields interpolate
/// to real values.
#[derive(Clone, Debug)]
pub struct TrigInterpolant<T> {
    x0: T,
    freqs: Vec<T>,
    nyquist: Vec<bool>,
    modes: Vec<Mode<T>>,
}

impl<T: Real> TrigInterpolant<T> {
    /// Keeps only coefficients with `|c| > threshold * max |c|`.
    pub fn new(spectrum: &Spectrum<T>, threshold: T) -> Self {
        let grid = spectrum.grid();
        let n = grid.n();
        let max = spectrum
            .coeffs()
            .iter()
            .map(|c| c.norm())
            .fold(T::zero(), |a, b| a.max(b));
        let cut = threshold * max;
        let scale = T::one() / T::from_count(n);
        let mut modes = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let c = spectrum.coeffs()[i * n + j];
                if c.norm() > cut || (cut == T::zero() && c.norm() > T::zero()) {
                    modes.push(Mode { i, j, coeff: c * scale });
                }
            }
        }
        Self {
            x0: grid.coord(0),
            freqs: grid.frequencies(),
            nyquist: (0..n).map(|i| grid.is_nyquist(i)).collect(),
            modes,
        }
    }

    pub fn mode_count(&self) -> usize {
        self.modes.len()
    }

    /// Per-axis factors `e^{i xi x}` and their derivatives.
    fn axis_factors(&self, x: T) -> Vec<(Complex<T>, Complex<T>)> {
        self.freqs
            .iter()
            .zip(&self.nyquist)
            .map(|(&xi, &nyquist)| {
                let phase = xi * x;
                if nyquist {
                    let (s, c) = phase.sin_cos();
                    (Complex::new(c, T::zero()), Complex::new(-xi * s, T::zero()))
                } else {
                    let e = Complex::from_polar(T::one(), phase);
                    (e, e * Complex::new(T::zero(), xi))
                }
            })
            .collect()
    }

    pub fn value(&self, x: T, y: T) -> Complex<T> {
        self.value_and_gradient(x, y).0
    }

    /// Value and gradient `(u, du/dx1, du/dx2)` at a point.
    pub fn value_and_gradient(&self, x: T, y: T) -> (Complex<T>, Complex<T>, Complex<T>) {
        let fx = self.axis_factors(x - self.x0);
        let fy = self.axis_factors(y - self.x0);
        let zero = Complex::new(T::zero(), T::zero());
        let (mut u, mut ux, mut uy) = (zero, zero, zero);
        for m in &self.modes {
            let (a, da) = fx[m.i];
            let (b, db) = fy[m.j];
            let cb = m.coeff * b;
            u = u + cb * a;
            ux = ux + cb * da;
            uy = uy + m.coeff * a * db;
        }
        (u, ux, uy)
    }
}
