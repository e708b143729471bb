use crate::error::Result;
use crate::field::spectral::gradient_density;
use crate::field::{Field, Grid};
use crate::nonlinearity::Nonlinearity;
use crate::propagators::{Equation, State};
use crate::scalar::Real;

/// Integrated conserved quantities of one state.
///
/// For Klein-Gordon `E = E0 + potential`; for Schrödinger `kinetic = 0`,
/// `H = gradient + potential` and `E = H + M`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyReport<T> {
    pub t: T,
    /// `E = ∫ |u̇|^2 + |∇u|^2 + |u|^2 + 2F(u)`.
    pub energy: T,
    /// Free energy `E0`, the same without `2F`.
    pub free_energy: T,
    /// `M = ∫ |u|^2`.
    pub mass: T,
    /// `H = ∫ |∇u|^2 + 2F(u)`.
    pub hamiltonian: T,
    pub kinetic: T,
    pub gradient: T,
    pub mass_term: T,
    /// `2 ∫ F(u)`.
    pub potential: T,
}

/// Linear and nonlinear energy densities `e_L` and `e_N = e_L + 2F(u)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EnergyDensities<T: Real> {
    pub linear: Field<T>,
    pub nonlinear: Field<T>,
}

fn sum<T: Real>(grid: Grid<T>, density: &[T]) -> T {
    density.iter().copied().sum::<T>() * grid.cell_area()
}

fn potential_density<T: Real>(u: &Field<T>, nonlinearity: Nonlinearity) -> Result<Vec<T>> {
    u.values()
        .iter()
        .map(|&v| Ok(T::lit(2.0) * nonlinearity.potential(v)?))
        .collect()
}

/// Quadrature of every energy term of `state`.
pub fn energy_report<T: Real, S: State<T>>(state: &S, nonlinearity: Nonlinearity) -> Result<EnergyReport<T>> {
    let u = state.u();
    let grid = u.grid();
    let kinetic = state
        .velocity()
        .map(|v| v.integrate(|c| c.norm_sqr()))
        .unwrap_or_else(T::zero);
    let gradient = u.transform().weighted_l2_sq(|a, b| a * a + b * b);
    let mass_term = u.integrate(|c| c.norm_sqr());
    let potential = sum(grid, &potential_density(u, nonlinearity)?);
    let free_energy = kinetic + gradient + mass_term;
    Ok(EnergyReport {
        t: state.time(),
        energy: free_energy + potential,
        free_energy,
        mass: mass_term,
        hamiltonian: gradient + potential,
        kinetic,
        gradient,
        mass_term,
        potential,
    })
}

/// Pointwise `e_L = |u̇|^2 + |∇u|^2 + |u|^2` and `e_N = e_L + 2F(u)`.
pub fn energy_densities<T: Real, S: State<T>>(state: &S, nonlinearity: Nonlinearity) -> Result<EnergyDensities<T>> {
    let u = state.u();
    let mut linear = gradient_density(u);
    for (d, v) in linear.iter_mut().zip(u.values()) {
        *d = *d + v.norm_sqr();
    }
    if let Some(udot) = state.velocity() {
        for (d, v) in linear.iter_mut().zip(udot.values()) {
            *d = *d + v.norm_sqr();
        }
    }
    let nonlinear: Vec<T> = linear
        .iter()
        .zip(potential_density(u, nonlinearity)?)
        .map(|(&l, p)| l + p)
        .collect();
    Ok(EnergyDensities {
        linear: Field::real(u.grid(), linear)?,
        nonlinear: Field::real(u.grid(), nonlinear)?,
    })
}

/// Fraction of the monitored density outside the central half of the box,
/// i.e. where `max(|x_1|, |x_2|) > L/4`.
///
/// Klein-Gordon runs monitor `e_L`; Schrödinger runs monitor `|u|^2`.
pub fn boundary_leakage<T: Real, S: State<T>>(state: &S) -> T {
    let u = state.u();
    let grid = u.grid();
    let density: Vec<T> = match S::EQUATION {
        Equation::KleinGordon => {
            let mut d = gradient_density(u);
            for (x, v) in d.iter_mut().zip(u.values()) {
                *x = *x + v.norm_sqr();
            }
            if let Some(udot) = state.velocity() {
                for (x, v) in d.iter_mut().zip(udot.values()) {
                    *x = *x + v.norm_sqr();
                }
            }
            d
        }
        Equation::Schrodinger => u.values().iter().map(|v| v.norm_sqr()).collect(),
    };
    let quarter = grid.length() / T::lit(4.0);
    let mut outside = T::zero();
    let mut total = T::zero();
    for (idx, &d) in density.iter().enumerate() {
        let (x, y) = grid.point(idx);
        total = total + d;
        if num_traits::Float::abs(x).max(num_traits::Float::abs(y)) > quarter {
            outside = outside + d;
        }
    }
    if total == T::zero() {
        T::zero()
    } else {
        outside / total
    }
}
