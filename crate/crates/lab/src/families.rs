//! Initial data from the configured family.

use kgsl::constructions::{build_vn, moser_bump, traveling_packet, CounterexampleParams, CounterexampleState};
use kgsl::field::{Field, Grid, Spectrum};
use kgsl::propagators::{Equation, KgState, NlsState};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{ExperimentConfig, InitialData};
use crate::error::{CliError, CliResult};
use crate::snapshot::SnapshotFile;

/// Initial state for either equation.
#[derive(Clone, Debug)]
pub enum InitialState {
    Kg(KgState<f64>),
    Nls(NlsState<f64>),
}

impl InitialState {
    fn from_field(equation: Equation, u: Field<f64>) -> CliResult<Self> {
        Ok(match equation {
            Equation::KleinGordon => InitialState::Kg(KgState::at_rest(u)?),
            Equation::Schrodinger => InitialState::Nls(NlsState::new(u, 0.0)),
        })
    }
}

/// Real field with seeded random Fourier coefficients on `|ξ| <= kmax`,
/// damped by `e^{-|ξ|^2/kmax^2}` and scaled to sup norm `amplitude`.
pub fn random_smooth(grid: Grid<f64>, seed: u64, amplitude: f64, kmax: f64) -> CliResult<Field<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = grid.n();
    let mut coeffs = vec![Complex::new(0.0, 0.0); n * n];
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (grid.frequency(i), grid.frequency(j));
            let r2 = a * a + b * b;
            if r2 <= kmax * kmax {
                let damp = (-r2 / (kmax * kmax)).exp();
                coeffs[i * n + j] = Complex::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * damp;
            }
        }
    }
    let u = Spectrum::from_coeffs(grid, coeffs)?.into_field().into_real_part();
    let peak = u.max_abs();
    Ok(if peak > 0.0 { u.scaled(amplitude / peak) } else { u })
}

/// Builds the configured initial state.
pub fn initial_state(config: &ExperimentConfig) -> CliResult<InitialState> {
    let grid = Grid::new(config.grid.n, config.grid.length)?;
    let equation = config.equation();
    match &config.initial_data {
        InitialData::Gaussian { amplitude, width } => {
            let (a, w) = (*amplitude, *width);
            let u = Field::from_real_fn(grid, |x, y| a * (-(x * x + y * y) / (w * w)).exp());
            InitialState::from_field(equation, u)
        }
        InitialData::MoserBump { m, rho, scale } => {
            InitialState::from_field(equation, moser_bump(*m, *rho, grid)?.scaled(*scale))
        }
        InitialData::Vn { n_cut, a } => {
            let params = CounterexampleParams::new(*n_cut, *a, equation)?;
            Ok(match build_vn(&params, grid)? {
                CounterexampleState::Kg(s) => InitialState::Kg(s),
                CounterexampleState::Nls(s) => InitialState::Nls(s),
            })
        }
        InitialData::TravelingPacket {
            frequency,
            direction,
            width,
            amplitude,
        } => Ok(InitialState::Kg(traveling_packet(
            *frequency,
            (direction[0], direction[1]),
            *width,
            *amplitude,
            grid,
        )?)),
        InitialData::RandomSmooth {
            amplitude,
            max_frequency,
        } => InitialState::from_field(equation, random_smooth(grid, config.run.seed, *amplitude, *max_frequency)?),
        InitialData::File { path } => {
            let snap = SnapshotFile::read(path)?;
            if snap.n != grid.n() || snap.length != grid.length() {
                return Err(CliError::Config {
                    field: "initial_data.path".into(),
                    message: format!(
                        "snapshot grid (n = {}, L = {}) differs from the configured grid (n = {}, L = {})",
                        snap.n,
                        snap.length,
                        grid.n(),
                        grid.length()
                    ),
                });
            }
            if snap.equation != equation {
                return Err(CliError::Config {
                    field: "initial_data.path".into(),
                    message: format!("snapshot holds {} data but run.equation is {}", snap.equation.tag(), equation.tag()),
                });
            }
            Ok(match equation {
                Equation::KleinGordon => InitialState::Kg(snap.to_kg()?),
                Equation::Schrodinger => InitialState::Nls(snap.to_nls()?),
            })
        }
    }
}
