use num_complex::Complex;

use crate::error::{LabError, Result};
use crate::field::{Field, Grid};
use crate::scalar::Real;

/// Which evolution equation a state belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Equation {
    /// `ü - Δu + u + f(u) = 0`.
    KleinGordon,
    /// `i u̇ + Δu = f(u)`.
    Schrodinger,
}

impl Equation {
    pub fn tag(self) -> &'static str {
        match self {
            Equation::KleinGordon => "kg",
            Equation::Schrodinger => "nls",
        }
    }
}

/// Common view of Klein-Gordon and Schrödinger states.
pub trait State<T: Real>: Clone + Send + Sync {
    const EQUATION: Equation;

    fn u(&self) -> &Field<T>;

    /// `u̇` for second-order equations.
    fn velocity(&self) -> Option<&Field<T>>;

    fn time(&self) -> T;

    fn grid(&self) -> Grid<T> {
        self.u().grid()
    }

    /// Exact linear evolution by `t` (negative `t` runs backwards).
    fn free_flow(&self, t: T) -> Self;

    /// The time-reflected state: the solution run backwards is the
    /// solution of the reflected data run forwards.
    fn reversed(&self) -> Self;

    fn with_time(self, t: T) -> Self;
}

/// Real Klein-Gordon data `(u, u̇)` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct KgState<T: Real> {
    u: Field<T>,
    udot: Field<T>,
    t: T,
}

impl<T: Real> KgState<T> {
    pub fn new(u: Field<T>, udot: Field<T>, t: T) -> Result<Self> {
        u.ensure_same_grid(&udot)?;
        let u = u.try_into_real()?;
        let udot = udot.try_into_real()?;
        Ok(Self { u, udot, t })
    }

    /// Data at rest: `u̇ = 0`.
    pub fn at_rest(u: Field<T>) -> Result<Self> {
        let udot = Field::zeros(u.grid());
        Self::new(u, udot, T::zero())
    }

    pub fn udot(&self) -> &Field<T> {
        &self.udot
    }

    pub fn into_parts(self) -> (Field<T>, Field<T>, T) {
        (self.u, self.udot, self.t)
    }
}

impl<T: Real> State<T> for KgState<T> {
    const EQUATION: Equation = Equation::KleinGordon;

    fn u(&self) -> &Field<T> {
        &self.u
    }

    fn velocity(&self) -> Option<&Field<T>> {
        Some(&self.udot)
    }

    fn time(&self) -> T {
        self.t
    }

    fn free_flow(&self, t: T) -> Self {
        free_kg(self, t)
    }

    fn reversed(&self) -> Self {
        Self {
            u: self.u.clone(),
            udot: self.udot.scaled(-T::one()),
            t: -self.t,
        }
    }

    fn with_time(mut self, t: T) -> Self {
        self.t = t;
        self
    }
}

/// Complex Schrödinger data `u` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct NlsState<T: Real> {
    u: Field<T>,
    t: T,
}

impl<T: Real> NlsState<T> {
    pub fn new(u: Field<T>, t: T) -> Self {
        Self { u, t }
    }

    pub fn into_parts(self) -> (Field<T>, T) {
        (self.u, self.t)
    }
}

impl<T: Real> State<T> for NlsState<T> {
    const EQUATION: Equation = Equation::Schrodinger;

    fn u(&self) -> &Field<T> {
        &self.u
    }

    fn velocity(&self) -> Option<&Field<T>> {
        None
    }

    fn time(&self) -> T {
        self.t
    }

    fn free_flow(&self, t: T) -> Self {
        free_nls(self, t)
    }

    fn reversed(&self) -> Self {
        Self {
            u: self.u.map(|c| c.conj()),
            t: -self.t,
        }
    }

    fn with_time(mut self, t: T) -> Self {
        self.t = t;
        self
    }
}

/// `⟨ξ⟩ = (1 + |ξ|^2)^{1/2}` for every coefficient, row-major.
pub(crate) fn kg_frequencies<T: Real>(grid: Grid<T>) -> Vec<T> {
    let freqs = grid.frequencies();
    let mut out = Vec::with_capacity(grid.len());
    for &a in &freqs {
        for &b in &freqs {
            out.push((T::one() + a * a + b * b).sqrt());
        }
    }
    out
}

/// `|ξ|^2` for every coefficient, row-major.
pub(crate) fn laplace_symbol<T: Real>(grid: Grid<T>) -> Vec<T> {
    let freqs = grid.frequencies();
    let mut out = Vec::with_capacity(grid.len());
    for &a in &freqs {
        for &b in &freqs {
            out.push(a * a + b * b);
        }
    }
    out
}

/// Applies the free Klein-Gordon group for time `t` to spectral data.
pub(crate) fn kg_rotate<T: Real>(u_hat: &mut [Complex<T>], v_hat: &mut [Complex<T>], omega: &[T], t: T) {
    kg_apply_rotation(u_hat, v_hat, &kg_rotation(omega, t));
}

/// Per-mode `(cos ωt, sin ωt / ω, ω sin ωt)`.
pub(crate) fn kg_rotation<T: Real>(omega: &[T], t: T) -> Vec<[T; 3]> {
    omega
        .iter()
        .map(|&w| {
            let (s, c) = (w * t).sin_cos();
            [c, s / w, w * s]
        })
        .collect()
}

pub(crate) fn kg_apply_rotation<T: Real>(u_hat: &mut [Complex<T>], v_hat: &mut [Complex<T>], rotation: &[[T; 3]]) {
    for ((u, v), &[c, s_over_w, w_s]) in u_hat.iter_mut().zip(v_hat.iter_mut()).zip(rotation) {
        let nu = *u * c + *v * s_over_w;
        let nv = *v * c - *u * w_s;
        *u = nu;
        *v = nv;
    }
}

/// Exact free Klein-Gordon evolution
/// `û(t) = cos(t⟨ξ⟩) û_0 + sin(t⟨ξ⟩)/⟨ξ⟩ û_1`.
pub fn free_kg<T: Real>(state: &KgState<T>, t: T) -> KgState<T> {
    let grid = state.grid();
    let omega = kg_frequencies(grid);
    let mut u_hat = state.u.transform();
    let mut v_hat = state.udot.transform();
    kg_rotate(u_hat.coeffs_mut(), v_hat.coeffs_mut(), &omega, t);
    KgState {
        u: u_hat.into_field().into_real_part(),
        udot: v_hat.into_field().into_real_part(),
        t: state.t + t,
    }
}

/// Exact free Schrödinger evolution `û(t) = e^{-it|ξ|^2} û_0`.
pub fn free_nls<T: Real>(state: &NlsState<T>, t: T) -> NlsState<T> {
    let mut u_hat = state.u.transform();
    u_hat.apply(|a, b| Complex::from_polar(T::one(), -t * (a * a + b * b)));
    NlsState {
        u: u_hat.into_field(),
        t: state.t + t,
    }
}

pub(crate) fn check_time_step<T: Real>(dt: T) -> Result<()> {
    if dt > T::zero() && dt.is_finite() {
        Ok(())
    } else {
        Err(LabError::InvalidParameter(format!("time step {dt} must be positive and finite")))
    }
}
