use num_complex::Complex;

use crate::error::{LabError, Result};
use crate::field::spectral::spectral_multiplier;
use crate::field::{Field, Grid};
use crate::propagators::KgState;
use crate::scalar::Real;

/// High-frequency Klein-Gordon packet `A e^{-|x|^2/R^2} cos(N c·x)` moving
/// in direction `c`.
///
/// The velocity comes from the positive-frequency branch: with
/// `ψ = A e^{-|x|^2/R^2} e^{iN c·x}`, the data is `u = Re ψ` and
/// `u̇ = Re(-i⟨∇⟩ψ)`.
pub fn traveling_packet<T: Real>(
    frequency: T,
    direction: (T, T),
    width: T,
    amplitude: T,
    grid: Grid<T>,
) -> Result<KgState<T>> {
    let norm = (direction.0 * direction.0 + direction.1 * direction.1).sqrt();
    if num_traits::Float::abs(norm - T::one()) > T::lit(1e-12) {
        return Err(LabError::InvalidParameter(format!("direction must be a unit vector, got |c| = {norm}")));
    }
    if !(width > T::zero()) {
        return Err(LabError::InvalidParameter(format!("envelope width {width} must be positive")));
    }
    // the envelope's spectrum extends a few 1/R beyond N
    let reach = frequency + T::lit(8.0) / width;
    if reach > grid.max_frequency() * T::lit(2.0 / 3.0) {
        return Err(LabError::UnderResolved(format!(
            "packet frequency {frequency} with width {width} exceeds two thirds of the grid band {}",
            grid.max_frequency()
        )));
    }
    let (c1, c2) = (direction.0 * frequency, direction.1 * frequency);
    let psi = Field::from_fn(grid, |x, y| {
        Complex::from_polar(amplitude * (-(x * x + y * y) / (width * width)).exp(), c1 * x + c2 * y)
    });
    let dpsi = spectral_multiplier(&psi, |a, b| Complex::new(T::zero(), -(T::one() + a * a + b * b).sqrt()));
    let u = Field::real(grid, psi.re())?;
    let udot = Field::real(grid, dpsi.re())?;
    KgState::new(u, udot, T::zero())
}
