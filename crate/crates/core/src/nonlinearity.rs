//! Pointwise evaluation of the exponential nonlinearity and its companions.
//!
//! With `s = 4π|u|^2`:
//!
//! ```text
//! f(u)  = (e^s - 1 - s) u
//! F(u)  = (e^s - 1 - s - s^2/2) / (8π)
//! G(u)  = ū f(u) - 2F(u) = (s (e^s - 1 - s) - (e^s - 1 - s - s^2/2)) / (4π)
//! |f'|  = (e^s - 1 - s) + 2s (e^s - 1)
//! ```
//!
//! Below the series switch the exponential remainders are summed as Taylor
//! series, which avoids the cancellation of `e^s - 1 - s` near zero.

use num_complex::Complex;

use crate::error::{LabError, Result};
use crate::field::{norm, Field, NormSpec};
use crate::scalar::Real;

/// Exponents `4π|u|^2` above this are reported as overflow.
pub const OVERFLOW_EXPONENT: f64 = 700.0;

/// Where the Taylor series hand over to the closed forms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NonlinearityTable {
    pub series_switch: f64,
    pub series_order: usize,
}

impl Default for NonlinearityTable {
    fn default() -> Self {
        Self {
            series_switch: 0.5,
            series_order: 20,
        }
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

impl NonlinearityTable {
    pub fn new(series_switch: f64, series_order: usize) -> Result<Self> {
        if !(series_switch > 0.0 && series_switch <= 1.0) {
            return Err(LabError::InvalidParameter(format!(
                "series switch {series_switch} must lie in (0, 1]"
            )));
        }
        let dropped = series_switch.powi(series_order as i32 + 1) / factorial(series_order + 1);
        if dropped >= 1e-17 {
            return Err(LabError::InvalidParameter(format!(
                "series order {series_order} leaves a dropped term {dropped:e} at the switch"
            )));
        }
        Ok(Self {
            series_switch,
            series_order,
        })
    }

    fn check<T: Real>(s: T) -> Result<()> {
        if s > T::lit(OVERFLOW_EXPONENT) || s.is_nan() {
            Err(LabError::Overflow { exponent: s.as_f64() })
        } else {
            Ok(())
        }
    }

    /// `sum_{k=first}^{m} c_k s^k / k!`.
    fn series<T: Real>(&self, s: T, first: usize, coeff: impl Fn(usize) -> T) -> T {
        let mut term = T::one();
        for k in 1..first {
            term = term * s / T::from_count(k);
        }
        let mut sum = T::zero();
        let cutoff = T::epsilon() * T::lit(0.01);
        for k in first..=self.series_order {
            term = term * s / T::from_count(k);
            let add = coeff(k) * term;
            sum = sum + add;
            if add.abs() <= cutoff * sum.abs() {
                break;
            }
        }
        sum
    }

    fn use_series<T: Real>(&self, s: T) -> bool {
        s < T::lit(self.series_switch)
    }

    /// `e^s - 1 - s` by Taylor series.
    pub fn series_exp2<T: Real>(&self, s: T) -> T {
        self.series(s, 2, |_| T::one())
    }

    /// `e^s - 1 - s` in closed form.
    pub fn direct_exp2<T: Real>(s: T) -> T {
        s.exp_m1() - s
    }

    /// `e^s - 1 - s - s^2/2` by Taylor series.
    pub fn series_exp3<T: Real>(&self, s: T) -> T {
        self.series(s, 3, |_| T::one())
    }

    pub fn direct_exp3<T: Real>(s: T) -> T {
        s.exp_m1() - s - s * s / T::lit(2.0)
    }

    /// `s (e^s - 1 - s) - (e^s - 1 - s - s^2/2)` by Taylor series.
    pub fn series_g<T: Real>(&self, s: T) -> T {
        self.series(s, 3, |k| T::from_count(k - 1))
    }

    pub fn direct_g<T: Real>(s: T) -> T {
        s * Self::direct_exp2(s) - Self::direct_exp3(s)
    }

    /// `(e^s - 1 - s) + 2s (e^s - 1)` by Taylor series.
    pub fn series_fprime<T: Real>(&self, s: T) -> T {
        self.series(s, 2, |k| T::from_count(2 * k + 1))
    }

    pub fn direct_fprime<T: Real>(s: T) -> T {
        Self::direct_exp2(s) + T::lit(2.0) * s * s.exp_m1()
    }

    /// `e^s - 1 - s` with the series switch.
    pub fn exp2<T: Real>(&self, s: T) -> Result<T> {
        Self::check(s)?;
        Ok(if self.use_series(s) {
            self.series_exp2(s)
        } else {
            Self::direct_exp2(s)
        })
    }

    pub fn exp3<T: Real>(&self, s: T) -> Result<T> {
        Self::check(s)?;
        Ok(if self.use_series(s) {
            self.series_exp3(s)
        } else {
            Self::direct_exp3(s)
        })
    }

    fn g_core<T: Real>(&self, s: T) -> Result<T> {
        Self::check(s)?;
        Ok(if self.use_series(s) {
            self.series_g(s)
        } else {
            Self::direct_g(s)
        })
    }

    fn fprime_core<T: Real>(&self, s: T) -> Result<T> {
        Self::check(s)?;
        Ok(if self.use_series(s) {
            self.series_fprime(s)
        } else {
            Self::direct_fprime(s)
        })
    }

    /// `f(u)`.
    pub fn f<T: Real>(&self, u: Complex<T>) -> Result<Complex<T>> {
        Ok(u * self.exp2(exponent(u))?)
    }

    /// `F(u)`.
    pub fn potential<T: Real>(&self, u: Complex<T>) -> Result<T> {
        Ok(self.exp3(exponent(u))? / (T::lit(8.0) * T::PI()))
    }

    /// `G(u) = ū f(u) - 2F(u)`.
    pub fn g<T: Real>(&self, u: Complex<T>) -> Result<T> {
        Ok(self.g_core(exponent(u))? / (T::lit(4.0) * T::PI()))
    }

    /// Operator norm of the real derivative of `f` at `u`.
    pub fn fprime_mag<T: Real>(&self, u: Complex<T>) -> Result<T> {
        self.fprime_core(exponent(u))
    }
}

/// `4π|u|^2`.
#[inline]
pub fn exponent<T: Real>(u: Complex<T>) -> T {
    T::lit(4.0) * T::PI() * u.norm_sqr()
}

/// The nonlinearity driving a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Nonlinearity {
    /// `f(u) = (e^{4π|u|^2} - 1 - 4π|u|^2) u`.
    #[default]
    Exponential,
    /// `f = 0`: free evolution.
    Off,
    /// `f(u) = |u|^4 u`, the energy-subcritical polynomial contrast.
    Power5,
}

impl Nonlinearity {
    pub fn name(self) -> &'static str {
        match self {
            Nonlinearity::Exponential => "exponential",
            Nonlinearity::Off => "off",
            Nonlinearity::Power5 => "power5",
        }
    }

    pub fn f<T: Real>(self, u: Complex<T>) -> Result<Complex<T>> {
        match self {
            Nonlinearity::Exponential => NonlinearityTable::default().f(u),
            Nonlinearity::Off => Ok(Complex::new(T::zero(), T::zero())),
            Nonlinearity::Power5 => {
                let m = u.norm_sqr();
                Ok(u * (m * m))
            }
        }
    }

    /// Potential `F` with `f = ∂F/∂ū` normalised so that the energy carries `2F`.
    pub fn potential<T: Real>(self, u: Complex<T>) -> Result<T> {
        match self {
            Nonlinearity::Exponential => NonlinearityTable::default().potential(u),
            Nonlinearity::Off => Ok(T::zero()),
            Nonlinearity::Power5 => Ok(u.norm_sqr().powi(3) / T::lit(6.0)),
        }
    }

    /// `ū f(u) - 2F(u)`.
    pub fn g<T: Real>(self, u: Complex<T>) -> Result<T> {
        match self {
            Nonlinearity::Exponential => NonlinearityTable::default().g(u),
            Nonlinearity::Off => Ok(T::zero()),
            Nonlinearity::Power5 => Ok(u.norm_sqr().powi(3) * T::lit(2.0 / 3.0)),
        }
    }

    /// Real factor `r` with `f(u) = r(|u|) u`; the Schrödinger kick rotates
    /// by `exp(-i dt r)`.
    pub fn phase_rate<T: Real>(self, u: Complex<T>) -> Result<T> {
        match self {
            Nonlinearity::Exponential => NonlinearityTable::default().exp2(exponent(u)),
            Nonlinearity::Off => Ok(T::zero()),
            Nonlinearity::Power5 => {
                let m = u.norm_sqr();
                Ok(m * m)
            }
        }
    }
}

fn map_field<T: Real>(field: &Field<T>, op: impl Fn(Complex<T>) -> Result<Complex<T>>) -> Result<Field<T>> {
    let values = field.values().iter().map(|&u| op(u)).collect::<Result<Vec<_>>>()?;
    let out = Field::complex(field.grid(), values)?;
    Ok(if field.is_real() { out.into_real_part() } else { out })
}

fn map_real<T: Real>(field: &Field<T>, op: impl Fn(Complex<T>) -> Result<T>) -> Result<Field<T>> {
    let values = field.values().iter().map(|&u| op(u)).collect::<Result<Vec<_>>>()?;
    Field::real(field.grid(), values)
}

/// Pointwise `f(u)`.
pub fn eval_f<T: Real>(field: &Field<T>) -> Result<Field<T>> {
    let table = NonlinearityTable::default();
    map_field(field, |u| table.f(u))
}

/// Pointwise `F(u)`.
pub fn eval_potential<T: Real>(field: &Field<T>) -> Result<Field<T>> {
    let table = NonlinearityTable::default();
    map_real(field, |u| table.potential(u))
}

/// Pointwise `G(u)`.
pub fn eval_g<T: Real>(field: &Field<T>) -> Result<Field<T>> {
    let table = NonlinearityTable::default();
    map_real(field, |u| table.g(u))
}

/// Pointwise `|f'(u)|`.
pub fn eval_fprime_mag<T: Real>(field: &Field<T>) -> Result<Field<T>> {
    let table = NonlinearityTable::default();
    map_real(field, |u| table.fprime_mag(u))
}

/// `∫ (e^{4π|φ|^2} - 1) dx` and `‖φ‖_{H_μ}`.
pub fn tm_functional<T: Real>(field: &Field<T>, mu: f64) -> Result<(T, T)> {
    let h_mu = norm(field, NormSpec::HMu { mu })?;
    let mut sum = T::zero();
    for &u in field.values() {
        let s = exponent(u);
        NonlinearityTable::check(s)?;
        sum = sum + s.exp_m1();
    }
    Ok((sum * field.grid().cell_area(), h_mu))
}

/// Parameters of the logarithmic `L^∞` bound
/// `‖u‖_∞^2 <= λ ‖u‖_{H_μ}^2 log(C_λ + 8^α μ^{-α} ‖u‖_{C^α} / ‖u‖_{H_μ})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogInequality {
    pub alpha: f64,
    pub lambda: f64,
    pub mu: f64,
}

/// The three norms entering the logarithmic bound for one field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogInequalityTerms {
    pub linf_sq: f64,
    pub h_mu: f64,
    pub holder: f64,
}

impl LogInequality {
    pub fn new(alpha: f64, lambda: f64, mu: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(LabError::InvalidParameter(format!("alpha {alpha} must lie in (0, 1)")));
        }
        let floor = 1.0 / (2.0 * std::f64::consts::PI * alpha);
        if !(lambda > floor) {
            return Err(LabError::InvalidParameter(format!(
                "lambda {lambda} must exceed 1/(2π alpha) = {floor}"
            )));
        }
        if !(mu > 0.0 && mu <= 1.0) {
            return Err(LabError::InvalidParameter(format!("mu {mu} must lie in (0, 1]")));
        }
        Ok(Self { alpha, lambda, mu })
    }

    /// Norms of `field`, with `C^α` taken as the `B^α_{∞,∞}` grid norm.
    pub fn terms<T: Real>(&self, field: &Field<T>) -> Result<LogInequalityTerms> {
        let linf = norm(field, NormSpec::Lp { p: f64::INFINITY })?.as_f64();
        let h_mu = norm(field, NormSpec::HMu { mu: self.mu })?.as_f64();
        let holder = norm(
            field,
            NormSpec::Besov {
                s: self.alpha,
                p: f64::INFINITY,
                q: f64::INFINITY,
            },
        )?
        .as_f64();
        Ok(LogInequalityTerms {
            linf_sq: linf * linf,
            h_mu,
            holder,
        })
    }

    fn ratio(&self, t: &LogInequalityTerms) -> f64 {
        8f64.powf(self.alpha) * self.mu.powf(-self.alpha) * t.holder / t.h_mu
    }

    /// Right-hand side minus left-hand side; zero for the zero field.
    pub fn gap(&self, t: &LogInequalityTerms, c_lambda: f64) -> f64 {
        if t.h_mu == 0.0 {
            return 0.0;
        }
        self.lambda * t.h_mu * t.h_mu * (c_lambda + self.ratio(t)).ln() - t.linf_sq
    }

    /// `LHS / RHS`; zero for the zero field.
    pub fn saturation(&self, t: &LogInequalityTerms, c_lambda: f64) -> f64 {
        if t.h_mu == 0.0 {
            return 0.0;
        }
        t.linf_sq / (self.lambda * t.h_mu * t.h_mu * (c_lambda + self.ratio(t)).ln())
    }

    /// Smallest `C_λ >= 1` making every gap of the family nonnegative.
    pub fn minimal_constant(&self, family: &[LogInequalityTerms]) -> f64 {
        family
            .iter()
            .filter(|t| t.h_mu > 0.0)
            .map(|t| (t.linf_sq / (self.lambda * t.h_mu * t.h_mu)).exp() - self.ratio(t))
            .fold(1.0, f64::max)
    }
}
