use num_complex::Complex;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

use crate::scalar::Real;

/// Unitary two-dimensional FFT on an `n x n` row-major buffer.
///
/// Both directions carry a `1/n` factor so that the pair is unitary.
pub(crate) struct Fft2<T: Real> {
    n: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

const TILE: usize = 16;

impl<T: Real> Fft2<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn forward(&self, data: &mut [Complex<T>]) {
        self.run(data, self.forward.as_ref());
    }

    pub fn inverse(&self, data: &mut [Complex<T>]) {
        self.run(data, self.inverse.as_ref());
    }

    fn run(&self, data: &mut [Complex<T>], fft: &dyn Fft<T>) {
        let n = self.n;
        assert_eq!(data.len(), n * n, "buffer does not match FFT size");
        let zero = Complex::new(T::zero(), T::zero());
        let mut scratch = vec![zero; fft.get_inplace_scratch_len()];
        let mut transposed = vec![zero; n * n];
        fft.process_with_scratch(data, &mut scratch);
        transpose(data, &mut transposed, n, T::one());
        fft.process_with_scratch(&mut transposed, &mut scratch);
        transpose(&transposed, data, n, T::one() / T::from_count(n));
    }
}

/// `dst = scale * src^T` for `n x n` row-major buffers, in cache tiles.
fn transpose<T: Real>(src: &[Complex<T>], dst: &mut [Complex<T>], n: usize, scale: T) {
    for i0 in (0..n).step_by(TILE) {
        for j0 in (0..n).step_by(TILE) {
            for i in i0..(i0 + TILE).min(n) {
                for j in j0..(j0 + TILE).min(n) {
                    dst[j * n + i] = src[i * n + j] * scale;
                }
            }
        }
    }
}
