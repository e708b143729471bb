//! Pointwise densities of the virial-type identities.

use crate::error::{LabError, Result};
use crate::field::spectral::gradient;
use crate::field::Field;
use crate::nonlinearity::Nonlinearity;
use crate::propagators::{KgState, State};
use crate::scalar::Real;

/// `Q(u)` with
/// `t^2 Q = (t u̇ + r u_r + u)^2 + (r u̇ + t u_r)^2 + (t^2 + r^2)(|∇u|^2 - u_r^2 + u^2)`.
///
/// The grid never samples `r = 0`, so `u_r = ω·∇u` is defined everywhere.
pub fn q_density<T: Real>(state: &KgState<T>) -> Result<Field<T>> {
    let t = state.time();
    if t == T::zero() {
        return Err(LabError::Precondition("the Q density is defined for t != 0".into()));
    }
    let grid = state.grid();
    let u = state.u().re();
    let ud = state.udot().re();
    let (gx, gy) = gradient(state.u());
    let (gx, gy) = (gx.re(), gy.re());
    let t2 = t * t;
    let values = (0..grid.len())
        .map(|idx| {
            let (x, y) = grid.point(idx);
            let r = (x * x + y * y).sqrt();
            let ur = (x * gx[idx] + y * gy[idx]) / r;
            let grad2 = gx[idx] * gx[idx] + gy[idx] * gy[idx];
            let a = t * ud[idx] + r * ur + u[idx];
            let b = r * ud[idx] + t * ur;
            let angular = (grad2 - ur * ur).max(T::zero());
            (a * a + b * b + (t2 + r * r) * (angular + u[idx] * u[idx])) / t2
        })
        .collect();
    Field::real(grid, values)
}

/// `(|x u̇ + t∇u|^2 + |x × ∇u|^2 + (1 + t^2) G(u)) / (1 + |t|^3 + |x|^3)`.
pub fn morawetz_density<T: Real>(state: &KgState<T>, nonlinearity: Nonlinearity) -> Result<Field<T>> {
    let t = state.time();
    let grid = state.grid();
    let u = state.u().values();
    let ud = state.udot().re();
    let (gx, gy) = gradient(state.u());
    let (gx, gy) = (gx.re(), gy.re());
    let at = num_traits::Float::abs(t);
    let values = (0..grid.len())
        .map(|idx| {
            let (x, y) = grid.point(idx);
            let vx = x * ud[idx] + t * gx[idx];
            let vy = y * ud[idx] + t * gy[idx];
            let cross = x * gy[idx] - y * gx[idx];
            let g = nonlinearity.g(u[idx])?;
            let r = (x * x + y * y).sqrt();
            let weight = T::one() + at * at * at + r * r * r;
            Ok((vx * vx + vy * vy + cross * cross + (T::one() + t * t) * g) / weight)
        })
        .collect::<Result<Vec<_>>>()?;
    Field::real(grid, values)
}
