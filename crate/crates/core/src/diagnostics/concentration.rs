//! Concentration radius `R_A = inf{r : ∃c, ∫_{|x-c|<r} e_N > A}`.

use super::energy::energy_densities;
use crate::error::{LabError, Result};
use crate::field::local::DiskIntegrator;
use crate::field::Grid;
use crate::nonlinearity::Nonlinearity;
use crate::propagators::{Equation, State, Trajectory};
use crate::scalar::Real;

/// A concentration radius, or the sentinel for amounts no disk captures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Radius<T> {
    Finite(T),
    Infinite,
}

impl<T: Real> Radius<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            Radius::Finite(r) => Some(r),
            Radius::Infinite => None,
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Radius::Finite(r) => r.as_f64(),
            Radius::Infinite => f64::INFINITY,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcentrationRecord<T> {
    pub amount: T,
    pub radius: Radius<T>,
    /// Grid point achieving the amount at the returned radius.
    pub center: Option<(T, T)>,
    pub t: T,
}

/// Disk integrals of one state's nonlinear energy density, reusable across
/// amounts.
pub struct ConcentrationProbe<T: Real> {
    integrator: DiskIntegrator<T>,
    t: T,
}

impl<T: Real> ConcentrationProbe<T> {
    pub fn new<S: State<T>>(state: &S, nonlinearity: Nonlinearity) -> Result<Self> {
        let dens = energy_densities(state, nonlinearity)?;
        Ok(Self::from_density(state.grid(), &dens.nonlinear.re(), state.time()))
    }

    pub fn from_density(grid: Grid<T>, density: &[T], t: T) -> Self {
        Self {
            integrator: DiskIntegrator::new(grid, density),
            t,
        }
    }

    /// Total integral of the density.
    pub fn total(&self) -> T {
        self.integrator.total()
    }

    /// Bisection on the radius until the bracket is at most `tol` wide.
    pub fn radius(&self, amount: T, tol: T) -> Result<ConcentrationRecord<T>> {
        if !(amount > T::zero()) {
            return Err(LabError::InvalidParameter(format!("amount {amount} must be positive")));
        }
        if !(tol > T::zero()) {
            return Err(LabError::InvalidParameter(format!("tolerance {tol} must be positive")));
        }
        let infinite = ConcentrationRecord {
            amount,
            radius: Radius::Infinite,
            center: None,
            t: self.t,
        };
        if amount >= self.total() {
            return Ok(infinite);
        }
        let grid = self.integrator.grid();
        let mut hi = grid.length() / T::lit(2.0);
        let (at_hi, mut best) = self.integrator.max_disk_integral(hi);
        if at_hi <= amount {
            return Ok(infinite);
        }
        let mut lo = T::zero();
        while hi - lo > tol {
            let mid = (lo + hi) / T::lit(2.0);
            let (value, idx) = self.integrator.max_disk_integral(mid);
            if value > amount {
                hi = mid;
                best = idx;
            } else {
                lo = mid;
            }
        }
        Ok(ConcentrationRecord {
            amount,
            radius: Radius::Finite(hi),
            center: Some(grid.point(best)),
            t: self.t,
        })
    }
}

/// `R_A` of a single state with tolerance `tol` (one grid cell by default in
/// the lab).
pub fn concentration_radius<T: Real, S: State<T>>(
    state: &S,
    nonlinearity: Nonlinearity,
    amount: T,
    tol: T,
) -> Result<ConcentrationRecord<T>> {
    ConcentrationProbe::new(state, nonlinearity)?.radius(amount, tol)
}

/// Result of tracking `r_ε(t) = R_{(1-ε)E}` along a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub struct LipschitzReport<T> {
    pub radii: Vec<Radius<T>>,
    /// Largest `|r_ε(t) - r_ε(s)| / |t - s|` over consecutive finite pairs.
    pub max_ratio: T,
}

/// Tracks `r_ε` with `A = (1 - ε) E(0)` and reports its largest slope.
///
/// Only Klein-Gordon trajectories have a finite propagation speed; other
/// trajectories are rejected.
pub fn lipschitz_probe<T: Real, S: State<T>>(traj: &Trajectory<S, T>, eps: T, tol: T) -> Result<LipschitzReport<T>> {
    if S::EQUATION != Equation::KleinGordon {
        return Err(LabError::Precondition(
            "the Lipschitz bound needs finite propagation speed (Klein-Gordon only)".into(),
        ));
    }
    if !(eps > T::zero() && eps < T::one()) {
        return Err(LabError::InvalidParameter(format!("epsilon {eps} must lie in (0, 1)")));
    }
    let nonlinearity = traj.meta().nonlinearity;
    let amount = (T::one() - eps) * traj.records()[0].energy.energy;
    let radii = traj
        .states()
        .iter()
        .map(|s| Ok(ConcentrationProbe::new(s, nonlinearity)?.radius(amount, tol)?.radius))
        .collect::<Result<Vec<_>>>()?;
    let times = traj.times();
    let mut max_ratio = T::zero();
    for k in 1..radii.len() {
        if let (Radius::Finite(a), Radius::Finite(b)) = (radii[k - 1], radii[k]) {
            let slope = num_traits::Float::abs(b - a) / (times[k] - times[k - 1]);
            max_ratio = max_ratio.max(slope);
        }
    }
    Ok(LipschitzReport { radii, max_ratio })
}
