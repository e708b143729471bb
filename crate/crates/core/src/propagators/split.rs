//! Strang splitting with exact linear flows.
//!
//! Both integrators keep the solution in spectral space between steps, so a
//! step costs one inverse and one forward transform for the nonlinear kick.

use num_complex::Complex;

use super::state::{check_time_step, kg_apply_rotation, kg_frequencies, kg_rotation, laplace_symbol, KgState, NlsState, State};
use crate::error::Result;
use crate::field::fft::Fft2;
use crate::field::{Field, Grid, Spectrum};
use crate::nonlinearity::Nonlinearity;
use crate::scalar::Real;

/// A time stepper that owns its state.
pub trait Integrator<T: Real> {
    type State: State<T>;

    /// Advances by one step. On error the stepper must not be used again.
    fn step(&mut self) -> Result<()>;

    fn time(&self) -> T;

    fn state(&self) -> Self::State;
}

/// States that can be evolved by a splitting integrator.
pub trait Evolvable<T: Real>: State<T> {
    type Stepper: Integrator<T, State = Self>;

    fn stepper(&self, dt: T, nonlinearity: Nonlinearity) -> Result<Self::Stepper>;
}

/// Strang splitting for the Klein-Gordon equation: half free flow, velocity
/// kick `u̇ -= dt f(u)`, half free flow.
pub struct KgIntegrator<T: Real> {
    grid: Grid<T>,
    fft: Fft2<T>,
    dt: T,
    t0: T,
    steps: u64,
    nonlinearity: Nonlinearity,
    half_rotation: Vec<[T; 3]>,
    u_hat: Vec<Complex<T>>,
    v_hat: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

impl<T: Real> KgIntegrator<T> {
    pub fn new(state: &KgState<T>, dt: T, nonlinearity: Nonlinearity) -> Result<Self> {
        check_time_step(dt)?;
        let grid = state.grid();
        let fft = Fft2::new(grid.n());
        let mut u_hat = state.u().values().to_vec();
        let mut v_hat = state.udot().values().to_vec();
        fft.forward(&mut u_hat);
        fft.forward(&mut v_hat);
        Ok(Self {
            grid,
            fft,
            dt,
            t0: state.time(),
            steps: 0,
            nonlinearity,
            half_rotation: kg_rotation(&kg_frequencies(grid), dt / T::lit(2.0)),
            scratch: vec![Complex::new(T::zero(), T::zero()); grid.len()],
            u_hat,
            v_hat,
        })
    }

    fn kick(&mut self) -> Result<()> {
        if self.nonlinearity == Nonlinearity::Off {
            return Ok(());
        }
        self.scratch.copy_from_slice(&self.u_hat);
        self.fft.inverse(&mut self.scratch);
        for v in self.scratch.iter_mut() {
            let f = self.nonlinearity.f(Complex::new(v.re, T::zero()))?;
            *v = Complex::new(f.re, T::zero());
        }
        self.fft.forward(&mut self.scratch);
        for (v, f) in self.v_hat.iter_mut().zip(&self.scratch) {
            *v = *v - *f * self.dt;
        }
        Ok(())
    }
}

impl<T: Real> Integrator<T> for KgIntegrator<T> {
    type State = KgState<T>;

    fn step(&mut self) -> Result<()> {
        kg_apply_rotation(&mut self.u_hat, &mut self.v_hat, &self.half_rotation);
        self.kick()?;
        kg_apply_rotation(&mut self.u_hat, &mut self.v_hat, &self.half_rotation);
        self.steps += 1;
        Ok(())
    }

    fn time(&self) -> T {
        self.t0 + self.dt * T::lit(self.steps as f64)
    }

    fn state(&self) -> KgState<T> {
        let to_field = |coeffs: &[Complex<T>]| {
            Spectrum::from_coeffs(self.grid, coeffs.to_vec())
                .expect("coefficient buffer matches grid")
                .into_field()
                .into_real_part()
        };
        KgState::new(to_field(&self.u_hat), to_field(&self.v_hat), self.time())
            .expect("integrator keeps both fields on one grid")
    }
}

impl<T: Real> Evolvable<T> for KgState<T> {
    type Stepper = KgIntegrator<T>;

    fn stepper(&self, dt: T, nonlinearity: Nonlinearity) -> Result<KgIntegrator<T>> {
        KgIntegrator::new(self, dt, nonlinearity)
    }
}

/// Strang splitting for the Schrödinger equation. The kick
/// `u <- u exp(-i dt r(|u|))` solves `i u̇ = f(u)` exactly because the
/// modulus is conserved by it.
pub struct NlsIntegrator<T: Real> {
    grid: Grid<T>,
    fft: Fft2<T>,
    dt: T,
    t0: T,
    steps: u64,
    nonlinearity: Nonlinearity,
    half_phase: Vec<Complex<T>>,
    u_hat: Vec<Complex<T>>,
    scratch: Vec<Complex<T>>,
}

impl<T: Real> NlsIntegrator<T> {
    pub fn new(state: &NlsState<T>, dt: T, nonlinearity: Nonlinearity) -> Result<Self> {
        check_time_step(dt)?;
        let grid = state.grid();
        let fft = Fft2::new(grid.n());
        let mut u_hat = state.u().values().to_vec();
        fft.forward(&mut u_hat);
        let half = dt / T::lit(2.0);
        let half_phase = laplace_symbol(grid)
            .into_iter()
            .map(|k2| Complex::from_polar(T::one(), -half * k2))
            .collect();
        Ok(Self {
            grid,
            fft,
            dt,
            t0: state.time(),
            steps: 0,
            nonlinearity,
            half_phase,
            scratch: vec![Complex::new(T::zero(), T::zero()); grid.len()],
            u_hat,
        })
    }

    fn drift(&mut self) {
        for (u, p) in self.u_hat.iter_mut().zip(&self.half_phase) {
            *u = *u * *p;
        }
    }

    fn kick(&mut self) -> Result<()> {
        if self.nonlinearity == Nonlinearity::Off {
            return Ok(());
        }
        self.scratch.copy_from_slice(&self.u_hat);
        self.fft.inverse(&mut self.scratch);
        for v in self.scratch.iter_mut() {
            let rate = self.nonlinearity.phase_rate(*v)?;
            *v = *v * Complex::from_polar(T::one(), -self.dt * rate);
        }
        self.fft.forward(&mut self.scratch);
        self.u_hat.copy_from_slice(&self.scratch);
        Ok(())
    }
}

impl<T: Real> Integrator<T> for NlsIntegrator<T> {
    type State = NlsState<T>;

    fn step(&mut self) -> Result<()> {
        self.drift();
        self.kick()?;
        self.drift();
        self.steps += 1;
        Ok(())
    }

    fn time(&self) -> T {
        self.t0 + self.dt * T::lit(self.steps as f64)
    }

    fn state(&self) -> NlsState<T> {
        let field: Field<T> = Spectrum::from_coeffs(self.grid, self.u_hat.clone())
            .expect("coefficient buffer matches grid")
            .into_field();
        NlsState::new(field, self.time())
    }
}

impl<T: Real> Evolvable<T> for NlsState<T> {
    type Stepper = NlsIntegrator<T>;

    fn stepper(&self, dt: T, nonlinearity: Nonlinearity) -> Result<NlsIntegrator<T>> {
        NlsIntegrator::new(self, dt, nonlinearity)
    }
}

/// One Strang step of the Klein-Gordon equation.
pub fn step_kg<T: Real>(state: &KgState<T>, dt: T, nonlinearity: Nonlinearity) -> Result<KgState<T>> {
    let mut stepper = KgIntegrator::new(state, dt, nonlinearity)?;
    stepper.step()?;
    Ok(stepper.state())
}

/// One Strang step of the Schrödinger equation.
pub fn step_nls<T: Real>(state: &NlsState<T>, dt: T, nonlinearity: Nonlinearity) -> Result<NlsState<T>> {
    let mut stepper = NlsIntegrator::new(state, dt, nonlinearity)?;
    stepper.step()?;
    Ok(stepper.state())
}
