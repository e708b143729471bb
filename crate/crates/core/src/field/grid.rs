use crate::error::{LabError, Result};
use crate::scalar::Real;

/// Periodic square grid of `n x n` cells approximating the plane.
///
/// Sample `i` along each axis sits at `-L/2 + (i + 1/2) h` with `h = L/n`, so
/// the grid is offset by half a cell and no sample lands on the origin.
/// Storage is row-major with the first axis (`x1`) as the row index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid<T> {
    n: usize,
    length: T,
}

impl<T: Real> Grid<T> {
    pub fn new(n: usize, length: T) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(LabError::GridSize(n));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(LabError::BoxLength(length.as_f64()));
        }
        Ok(Self { n, length })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn length(&self) -> T {
        self.length
    }

    /// Number of samples, `n^2`.
    #[inline]
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn spacing(&self) -> T {
        self.length / T::from_count(self.n)
    }

    #[inline]
    pub fn cell_area(&self) -> T {
        let h = self.spacing();
        h * h
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    /// Physical coordinate of sample `i` along either axis.
    #[inline]
    pub fn coord(&self, i: usize) -> T {
        let half = T::lit(0.5);
        -half * self.length + (T::from_count(i) + half) * self.spacing()
    }

    /// Position of the sample stored at flat index `idx`.
    #[inline]
    pub fn point(&self, idx: usize) -> (T, T) {
        (self.coord(idx / self.n), self.coord(idx % self.n))
    }

    /// Integer wavenumber of FFT bin `i`, in `[-n/2, n/2)`.
    #[inline]
    pub fn wavenumber(&self, i: usize) -> isize {
        if i < self.n / 2 {
            i as isize
        } else {
            i as isize - self.n as isize
        }
    }

    /// Physical angular frequency `2 pi k / L` of FFT bin `i`.
    #[inline]
    pub fn frequency(&self, i: usize) -> T {
        T::lit(2.0) * T::PI() * T::lit(self.wavenumber(i) as f64) / self.length
    }

    #[inline]
    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.n / 2
    }

    /// Largest representable frequency per axis, `pi n / L`.
    pub fn max_frequency(&self) -> T {
        T::PI() * T::from_count(self.n) / self.length
    }

    /// FFT bin holding integer wavenumber `k` (taken modulo `n`).
    pub fn bin(&self, k: isize) -> usize {
        k.rem_euclid(self.n as isize) as usize
    }

    /// Per-axis frequency table indexed by FFT bin.
    pub fn frequencies(&self) -> Vec<T> {
        (0..self.n).map(|i| self.frequency(i)).collect()
    }
}
