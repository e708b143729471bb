//! Radial free solutions whose nonlinear term grows like `(log N)^{1/2}`
//! in a micro-window around the origin.
//!
//! The data is
//!
//! ```text
//! v_N(0) = sqrt(2π / log N) (2π)^{-2} ∫_{1 < |ξ| < e^{-a} N} |ξ|^{-2} e^{iξ·x} dξ,   v̇_N(0) = 0,
//! ```
//!
//! evolved by the free Klein-Gordon or Schrödinger flow. On the grid the
//! integral becomes a lattice sum over the admissible frequencies. Near the
//! origin the lab evaluates the exact radial integral instead: in the
//! variable `s = log |ξ|`
//!
//! ```text
//! v(t, r) = sqrt(2π / log N) / (2π) ∫_0^{log N - a} J_0(e^s r) m(t, e^s) ds
//! ```
//!
//! with `m = cos(t⟨ρ⟩)` (Klein-Gordon) or `m = e^{-itρ^2}` (Schrödinger).

use num_complex::Complex;

use crate::error::{LabError, Result};
use crate::field::{Grid, Spectrum};
use crate::nonlinearity::{Nonlinearity, NonlinearityTable};
use crate::propagators::{Equation, KgState, NlsState};
use crate::quadrature::gauss_legendre;

/// Parameters of the sequence: cutoff scale `N`, shell parameter `a` and the
/// equation whose free flow evolves the data.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CounterexampleParams {
    pub n_cut: f64,
    pub a: f64,
    pub kind: Equation,
}

impl CounterexampleParams {
    pub fn new(n_cut: f64, a: f64, kind: Equation) -> Result<Self> {
        if !(a > 0.5) {
            return Err(LabError::InvalidParameter(format!("shell parameter a = {a} must exceed 1/2")));
        }
        if !(n_cut >= (2.0 * a).exp()) {
            return Err(LabError::InvalidParameter(format!(
                "cutoff N = {n_cut} must be at least e^(2a) = {}",
                (2.0 * a).exp()
            )));
        }
        Ok(Self { n_cut, a, kind })
    }

    pub fn log_n(&self) -> f64 {
        self.n_cut.ln()
    }

    /// Upper frequency `e^{-a} N`.
    pub fn top_frequency(&self) -> f64 {
        (-self.a).exp() * self.n_cut
    }

    /// `sqrt(2π / log N)`.
    pub fn prefactor(&self) -> f64 {
        (std::f64::consts::TAU / self.log_n()).sqrt()
    }

    /// `‖∇v_N(0)‖^2 = (log N - a) / log N` on the plane.
    pub fn gradient_sq_exact(&self) -> f64 {
        (self.log_n() - self.a) / self.log_n()
    }

    /// The plane bound `‖v_N(0)‖^2 < 1 / (2 log N)`.
    pub fn l2_sq_bound(&self) -> f64 {
        1.0 / (2.0 * self.log_n())
    }

    /// Pointwise lower bound `sqrt(log N / 2π) - (a + ε^2) / sqrt(2π log N)`
    /// in the micro-window; `ε = 0` gives the bound at the origin at `t = 0`.
    pub fn pointwise_lower_bound(&self, eps: f64) -> f64 {
        let l = self.log_n();
        (l / std::f64::consts::TAU).sqrt() - (self.a + eps * eps) / (std::f64::consts::TAU * l).sqrt()
    }

    fn in_shell(&self, rho: f64) -> bool {
        rho > 1.0 && rho < self.top_frequency()
    }

    /// Checks that `grid` carries the whole frequency shell.
    pub fn check_grid(&self, grid: Grid<f64>) -> Result<()> {
        if grid.max_frequency() < self.top_frequency() {
            return Err(LabError::UnderResolved(format!(
                "grid reaches |ξ| = {:.1} but the shell extends to e^(-a) N = {:.1}",
                grid.max_frequency(),
                self.top_frequency()
            )));
        }
        if grid.length() < 4.0 * std::f64::consts::PI {
            return Err(LabError::UnderResolved(format!(
                "box length {} must be at least 4π to resolve the inner edge |ξ| = 1",
                grid.length()
            )));
        }
        Ok(())
    }

    /// Lattice amplitude `a_k` of the trigonometric polynomial
    /// `sum_k a_k e^{iξ_k·x}` approximating the Fourier integral.
    pub fn lattice_amplitude(&self, length: f64, xi1: f64, xi2: f64) -> f64 {
        let rho2 = xi1 * xi1 + xi2 * xi2;
        if self.in_shell(rho2.sqrt()) {
            self.prefactor() / (rho2 * length * length)
        } else {
            0.0
        }
    }

    /// Norms of the lattice data on `grid`, summed over frequencies without
    /// forming the field: by Parseval they equal the grid quadratures of
    /// the sampled data.
    pub fn lattice_norms(&self, grid: Grid<f64>) -> Result<LatticeNorms> {
        self.check_grid(grid)?;
        let length = grid.length();
        let area = length * length;
        let freqs = grid.frequencies();
        let mut norms = LatticeNorms::default();
        for &a in &freqs {
            for &b in &freqs {
                let amp = self.lattice_amplitude(length, a, b);
                if amp != 0.0 {
                    let rho2 = a * a + b * b;
                    norms.gradient_sq += area * amp * amp * rho2;
                    norms.l2_sq += area * amp * amp;
                    norms.origin += amp;
                    norms.modes += 1;
                }
            }
        }
        Ok(norms)
    }

    /// Spectrum of `v_N(0)` on `grid`.
    pub fn spectrum(&self, grid: Grid<f64>) -> Result<Spectrum<f64>> {
        self.check_grid(grid)?;
        let length = grid.length();
        Ok(Spectrum::from_fourier_series(grid, |a, b| {
            Complex::new(self.lattice_amplitude(length, a, b), 0.0)
        }))
    }
}

/// Parseval sums of the lattice data.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LatticeNorms {
    pub gradient_sq: f64,
    pub l2_sq: f64,
    /// `v_N(0, 0)`, the sum of all amplitudes.
    pub origin: f64,
    pub modes: usize,
}

/// `v_N(0)` as initial data for the selected equation.
#[derive(Clone, Debug)]
pub enum CounterexampleState {
    Kg(KgState<f64>),
    Nls(NlsState<f64>),
}

/// Builds `v_N(0)` on `grid` (with `v̇_N(0) = 0` for Klein-Gordon).
pub fn build_vn(params: &CounterexampleParams, grid: Grid<f64>) -> Result<CounterexampleState> {
    let u = params.spectrum(grid)?.into_field().into_real_part();
    Ok(match params.kind {
        Equation::KleinGordon => CounterexampleState::Kg(KgState::at_rest(u)?),
        Equation::Schrodinger => CounterexampleState::Nls(NlsState::new(u, 0.0)),
    })
}

/// `J_0(z) = (1/2π) ∫ cos(z sin θ) dθ` by the periodic trapezoid rule.
pub fn bessel_j0(z: f64) -> f64 {
    let m = 24 + (2.0 * z.abs()).ceil() as usize;
    let step = std::f64::consts::TAU / m as f64;
    (0..m).map(|k| (z * (step * k as f64).sin()).cos()).sum::<f64>() / m as f64
}

/// `J_1(z) = (1/2π) ∫ cos(θ - z sin θ) dθ` by the periodic trapezoid rule.
pub fn bessel_j1(z: f64) -> f64 {
    let m = 24 + (2.0 * z.abs()).ceil() as usize;
    let step = std::f64::consts::TAU / m as f64;
    (0..m)
        .map(|k| {
            let th = step * k as f64;
            (th - z * th.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

const SHELL_ORDER: usize = 12;
const WINDOW_ORDER: usize = 16;

/// Nodes and weights in `s = log ρ` over `[0, log N - a]`, unit panels.
fn shell_rule(params: &CounterexampleParams) -> Vec<(f64, f64)> {
    let top = params.top_frequency().ln();
    let panels = top.ceil().max(1.0) as usize;
    let width = top / panels as f64;
    let (x, w) = gauss_legendre(SHELL_ORDER);
    let mut rule = Vec::with_capacity(panels * SHELL_ORDER);
    for p in 0..panels {
        let mid = (p as f64 + 0.5) * width;
        for (xi, wi) in x.iter().zip(&w) {
            rule.push((mid + 0.5 * width * xi, 0.5 * width * wi));
        }
    }
    rule
}

/// The free solution near the origin, evaluated by radial quadrature.
pub struct RadialProfile {
    params: CounterexampleParams,
    rule: Vec<(f64, f64)>,
}

impl RadialProfile {
    pub fn new(params: CounterexampleParams) -> Self {
        let rule = shell_rule(&params);
        Self { params, rule }
    }

    fn scale(&self) -> f64 {
        self.params.prefactor() / std::f64::consts::TAU
    }

    fn multiplier(&self, t: f64, rho: f64) -> Complex<f64> {
        match self.params.kind {
            Equation::KleinGordon => Complex::new((t * (1.0 + rho * rho).sqrt()).cos(), 0.0),
            Equation::Schrodinger => Complex::from_polar(1.0, -t * rho * rho),
        }
    }

    /// `v(t, r)`.
    pub fn value(&self, t: f64, r: f64) -> Complex<f64> {
        let sum: Complex<f64> = self
            .rule
            .iter()
            .map(|&(s, w)| {
                let rho = s.exp();
                self.multiplier(t, rho) * (w * bessel_j0(rho * r))
            })
            .sum();
        sum * self.scale()
    }

    /// `∂_r v(t, r)`.
    pub fn radial_derivative(&self, t: f64, r: f64) -> Complex<f64> {
        let sum: Complex<f64> = self
            .rule
            .iter()
            .map(|&(s, w)| {
                let rho = s.exp();
                self.multiplier(t, rho) * (-w * rho * bessel_j1(rho * r))
            })
            .sum();
        sum * self.scale()
    }
}

/// Exponents of the window norm `L^p_t L^q_x`, checked against the scaling
/// relation of the equation (`1/p + 2/q = 2` for Klein-Gordon,
/// `1/p + 1/q = 3/2` for Schrödinger).
pub fn check_window_exponents(kind: Equation, p: f64, q: f64) -> Result<()> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(LabError::InvalidParameter(format!("exponents p = {p}, q = {q} must be at least 1")));
    }
    let (lhs, target, label) = match kind {
        Equation::KleinGordon => (1.0 / p + 2.0 / q, 2.0, "1/p + 2/q = 2"),
        Equation::Schrodinger => (1.0 / p + 1.0 / q, 1.5, "1/p + 1/q = 3/2"),
    };
    if (lhs - target).abs() > 1e-12 {
        return Err(LabError::InvalidParameter(format!(
            "exponents p = {p}, q = {q} violate {label}"
        )));
    }
    Ok(())
}

/// The micro-window `[0, T] x {|x| <= R}`: `T = ε/N` (Klein-Gordon) or
/// `ε^2/N^2` (Schrödinger), `R = ε/N`.
pub fn micro_window(params: &CounterexampleParams, eps: f64) -> (f64, f64) {
    let radius = eps / params.n_cut;
    let duration = match params.kind {
        Equation::KleinGordon => radius,
        Equation::Schrodinger => radius * radius,
    };
    (duration, radius)
}

/// Pointwise quantity whose window norm is measured: `|f(v)|` for
/// Klein-Gordon, `|∇ f(v)|` for Schrödinger.
fn window_integrand(
    profile: &RadialProfile,
    nonlinearity: Nonlinearity,
    t: f64,
    r: f64,
) -> Result<f64> {
    let v = profile.value(t, r);
    match profile.params.kind {
        Equation::KleinGordon => Ok(nonlinearity.f(Complex::new(v.re, 0.0))?.norm()),
        Equation::Schrodinger => {
            let vr = profile.radial_derivative(t, r);
            let sigma = v.norm_sqr();
            let (g, dg) = match nonlinearity {
                Nonlinearity::Exponential => {
                    let table = NonlinearityTable::default();
                    let s = 4.0 * std::f64::consts::PI * sigma;
                    (table.exp2(s)?, 4.0 * std::f64::consts::PI * s.exp_m1())
                }
                Nonlinearity::Power5 => (sigma * sigma, 2.0 * sigma),
                Nonlinearity::Off => (0.0, 0.0),
            };
            let dsigma = 2.0 * (v.conj() * vr).re;
            Ok((vr * g + v * (dg * dsigma)).norm())
        }
    }
}

fn gl_nodes(length: f64, order: usize) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(order);
    x.iter()
        .zip(&w)
        .map(|(xi, wi)| (0.5 * length * (1.0 + xi), 0.5 * length * wi))
        .collect()
}

fn lp_combine(values: &[(f64, f64)], p: f64) -> f64 {
    if p.is_infinite() {
        values.iter().map(|v| v.0).fold(0.0, f64::max)
    } else {
        values.iter().map(|&(v, w)| w * v.powf(p)).sum::<f64>().powf(1.0 / p)
    }
}

/// `‖f(v_N)‖_{L^p_t L^q_x}` (Klein-Gordon) or `‖∇f(v_N)‖_{L^p_t L^q_x}`
/// (Schrödinger) over the micro-window of size `ε`.
///
/// Gauss-Legendre in `t` and `r` (with the disk measure `2πr dr`); for an
/// infinite exponent the maximum over the nodes and the window edges is
/// taken.
pub fn counterexample_growth(
    params: &CounterexampleParams,
    p: f64,
    q: f64,
    eps: f64,
    nonlinearity: Nonlinearity,
) -> Result<f64> {
    check_window_exponents(params.kind, p, q)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(LabError::InvalidParameter(format!("window constant {eps} must lie in (0, 1)")));
    }
    let (duration, radius) = micro_window(params, eps);
    let profile = RadialProfile::new(*params);
    let with_edges = |mut nodes: Vec<(f64, f64)>, len: f64, infinite: bool| {
        if infinite {
            nodes.push((0.0, 0.0));
            nodes.push((len, 0.0));
        }
        nodes
    };
    let times = with_edges(gl_nodes(duration, WINDOW_ORDER), duration, p.is_infinite());
    let radii = with_edges(gl_nodes(radius, WINDOW_ORDER), radius, q.is_infinite());
    let mut per_time = Vec::with_capacity(times.len());
    for &(t, wt) in &times {
        let mut per_radius = Vec::with_capacity(radii.len());
        for &(r, wr) in &radii {
            let value = window_integrand(&profile, nonlinearity, t, r)?;
            per_radius.push((value, wr * std::f64::consts::TAU * r));
        }
        per_time.push((lp_combine(&per_radius, q), wt));
    }
    Ok(lp_combine(&per_time, p))
}

/// `(N, norm)` pairs over a sweep of cutoffs, all other parameters fixed.
pub fn growth_sweep(
    template: &CounterexampleParams,
    cutoffs: &[f64],
    p: f64,
    q: f64,
    eps: f64,
    nonlinearity: Nonlinearity,
) -> Result<Vec<(f64, f64)>> {
    cutoffs
        .iter()
        .map(|&n| {
            let params = CounterexampleParams::new(n, template.a, template.kind)?;
            Ok((n, counterexample_growth(&params, p, q, eps, nonlinearity)?))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_values() {
        // reference values of J_0, J_1
        assert!((bessel_j0(1.0) - 0.7651976865579666).abs() < 1e-14);
        assert!((bessel_j0(10.0) - (-0.2459357644513483)).abs() < 1e-14);
        assert!((bessel_j1(1.0) - 0.4400505857449335).abs() < 1e-14);
        assert!((bessel_j1(10.0) - 0.04347274616886144).abs() < 1e-14);
        assert_eq!(bessel_j0(0.0), 1.0);
    }

    #[test]
    fn exponent_relation() {
        assert!(check_window_exponents(Equation::KleinGordon, 2.0, 4.0 / 3.0).is_ok());
        assert!(check_window_exponents(Equation::KleinGordon, f64::INFINITY, 1.0).is_ok());
        assert!(check_window_exponents(Equation::KleinGordon, 2.0, 2.0).is_err());
        assert!(check_window_exponents(Equation::Schrodinger, 2.0, 1.0).is_ok());
    }

    #[test]
    fn origin_value_at_rest() {
        let params = CounterexampleParams::new(4096.0, 1.0, Equation::KleinGordon).unwrap();
        let profile = RadialProfile::new(params);
        let l = params.log_n();
        let exact = (l - 1.0) / (std::f64::consts::TAU * l).sqrt();
        assert!((profile.value(0.0, 0.0).re - exact).abs() < 1e-13);
        assert!(profile.value(0.0, 0.0).re >= params.pointwise_lower_bound(0.0) - 1e-13);
    }

    #[test]
    fn parameter_validation() {
        assert!(CounterexampleParams::new(4096.0, 0.4, Equation::KleinGordon).is_err());
        assert!(CounterexampleParams::new(2.0, 1.0, Equation::KleinGordon).is_err());
        let params = CounterexampleParams::new(4096.0, 1.0, Equation::KleinGordon).unwrap();
        assert!(params.lattice_norms(Grid::new(256, 40.0).unwrap()).is_err());
        assert!(params.lattice_norms(Grid::new(4096, 10.0).unwrap()).is_err());
    }
}
