//! Experiment configuration: one TOML section per subsystem, unknown keys
//! rejected.

use std::path::{Path, PathBuf};

use kgsl::nonlinearity::Nonlinearity;
use kgsl::propagators::Equation;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::normspec::parse_norm_spec;

/// Environment variable naming the default output root.
pub const OUTPUT_ENV: &str = "KGSL_OUTPUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum EquationKind {
    Kg,
    Nls,
}

impl EquationKind {
    pub fn equation(self) -> Equation {
        match self {
            EquationKind::Kg => Equation::KleinGordon,
            EquationKind::Nls => Equation::Schrodinger,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum NonlinearityKind {
    #[serde(rename = "on", alias = "exponential")]
    #[value(name = "on", alias = "exponential")]
    On,
    #[serde(rename = "off")]
    #[value(name = "off")]
    Off,
    #[serde(rename = "power5-contrast", alias = "power5")]
    #[value(name = "power5-contrast", alias = "power5")]
    Power5Contrast,
}

impl NonlinearityKind {
    pub fn nonlinearity(self) -> Nonlinearity {
        match self {
            NonlinearityKind::On => Nonlinearity::Exponential,
            NonlinearityKind::Off => Nonlinearity::Off,
            NonlinearityKind::Power5Contrast => Nonlinearity::Power5,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunSection {
    pub name: String,
    pub equation: EquationKind,
    pub seed: u64,
}

impl Default for RunSection {
    fn default() -> Self {
        Self {
            name: "run".into(),
            equation: EquationKind::Kg,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridSection {
    pub n: usize,
    pub length: f64,
}

impl Default for GridSection {
    fn default() -> Self {
        Self { n: 256, length: 40.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TimeSection {
    pub dt: f64,
    /// Final time `T`; zero gives a single snapshot.
    pub duration: f64,
    pub dt_save: f64,
}

impl Default for TimeSection {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            duration: 10.0,
            dt_save: 1.0,
        }
    }
}

/// Named initial-data family with its parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `A e^{-|x|^2/w^2}`, at rest for Klein-Gordon.
    Gaussian { amplitude: f64, width: f64 },
    /// Logarithmic bump multiplied by `scale`.
    MoserBump {
        m: f64,
        rho: f64,
        #[serde(default = "one")]
        scale: f64,
    },
    /// The logarithmic counterexample with cutoff `n_cut` and shell `a`.
    Vn { n_cut: f64, a: f64 },
    /// Klein-Gordon packet with carrier frequency `frequency` along `direction`.
    TravelingPacket {
        frequency: f64,
        direction: [f64; 2],
        width: f64,
        amplitude: f64,
    },
    /// Real field with seeded random Fourier modes up to `max_frequency`,
    /// scaled to sup norm `amplitude`.
    RandomSmooth { amplitude: f64, max_frequency: f64 },
    /// A snapshot written by a previous run.
    File { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

impl Default for InitialData {
    fn default() -> Self {
        InitialData::Gaussian {
            amplitude: 0.1,
            width: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NonlinearitySection {
    pub kind: NonlinearityKind,
}

impl Default for NonlinearitySection {
    fn default() -> Self {
        Self {
            kind: NonlinearityKind::On,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DiagnosticsSection {
    /// Amounts `A` for the concentration radii `R_A`.
    pub concentration_amounts: Vec<f64>,
    /// `ε` of `r_ε = R_{(1-ε)E(0)}` (Klein-Gordon only).
    pub r_epsilon: Option<f64>,
    /// Bisection tolerance of the radii; one quarter cell when unset.
    pub radius_tolerance: Option<f64>,
    /// Norm specs such as `lp:4` or `besov:0.25,inf,2`.
    pub norms: Vec<String>,
    /// Attach a scattering report to the summary.
    pub scattering: bool,
    /// Window of the `B^0_{∞,2}` decay fit; the second half of the run when
    /// unset.
    pub decay_t_min: Option<f64>,
    pub decay_t_max: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Output directory; `$KGSL_OUTPUT_DIR/<run.name>` when unset.
    pub dir: Option<PathBuf>,
    pub snapshots: bool,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: None,
            snapshots: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleSection {
    pub kind: EquationKind,
    /// Cutoff of the bound table.
    pub n_cut: f64,
    pub a: f64,
    pub eps: f64,
    /// Window exponents; `(2, 4/3)` for Klein-Gordon and `(2, 1)` for
    /// Schrödinger when unset.
    pub p: Option<f64>,
    pub q: Option<f64>,
    pub sweep: Vec<f64>,
    /// Repeat the sweep with the quintic nonlinearity.
    pub contrast: bool,
    /// Grid of the bound table; the smallest power of two resolving the
    /// shell on `L = 4π` when unset.
    pub grid_n: Option<usize>,
}

impl Default for CounterexampleSection {
    fn default() -> Self {
        Self {
            kind: EquationKind::Kg,
            n_cut: 4096.0,
            a: 1.0,
            eps: 0.1,
            p: None,
            q: None,
            sweep: vec![256.0, 1024.0, 4096.0, 16384.0],
            contrast: true,
            grid_n: None,
        }
    }
}

impl CounterexampleSection {
    pub fn exponents(&self) -> (f64, f64) {
        let (p, q) = match self.kind {
            EquationKind::Kg => (2.0, 4.0 / 3.0),
            EquationKind::Nls => (2.0, 1.0),
        };
        (self.p.unwrap_or(p), self.q.unwrap_or(q))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProbeFamily {
    Moser,
}

/// Normalization of the Moser family in the Trudinger-Moser probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProbeScaling {
    /// `φ / ‖φ‖_{H_μ}`.
    Unit,
    /// `φ` rescaled to `‖∇φ‖^2 = λ`.
    Gradient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProbeSection {
    pub family: ProbeFamily,
    pub m: Vec<f64>,
    pub rho: f64,
    pub mu: f64,
    pub scaling: ProbeScaling,
    pub lambda: f64,
    pub n: usize,
    pub length: f64,
    pub log_alpha: f64,
    pub log_lambda: f64,
}

impl Default for ProbeSection {
    fn default() -> Self {
        Self {
            family: ProbeFamily::Moser,
            m: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            rho: 2.0,
            mu: 1.0,
            scaling: ProbeScaling::Unit,
            lambda: 1.2,
            n: 4096,
            length: 16.0,
            log_alpha: 0.5,
            log_lambda: 2.0 / std::f64::consts::PI,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub run: RunSection,
    pub grid: GridSection,
    pub time: TimeSection,
    pub initial_data: InitialData,
    pub nonlinearity: NonlinearitySection,
    pub diagnostics: DiagnosticsSection,
    pub output: OutputSection,
    pub counterexample: CounterexampleSection,
    pub probe: ProbeSection,
}

fn invalid(field: &str, message: impl Into<String>) -> CliError {
    CliError::Config {
        field: field.into(),
        message: message.into(),
    }
}

fn positive(field: &str, value: f64) -> CliResult<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive and finite, got {value}")))
    }
}

fn nonnegative(field: &str, value: f64) -> CliResult<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be nonnegative and finite, got {value}")))
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> CliResult<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| invalid("--config", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    pub fn equation(&self) -> Equation {
        self.run.equation.equation()
    }

    pub fn nonlinearity(&self) -> Nonlinearity {
        self.nonlinearity.kind.nonlinearity()
    }

    /// Resolved output directory.
    pub fn output_dir(&self) -> PathBuf {
        match &self.output.dir {
            Some(dir) => dir.clone(),
            None => {
                let root = std::env::var_os(OUTPUT_ENV)
                    .map(PathBuf::from)
                    .unwrap_or_else(|| PathBuf::from("kgsl-output"));
                root.join(&self.run.name)
            }
        }
    }

    /// Checks the sections a simulation needs.
    pub fn validate(&self) -> CliResult<()> {
        if self.grid.n < 16 || !self.grid.n.is_power_of_two() {
            return Err(invalid("grid.n", format!("must be a power of two of at least 16, got {}", self.grid.n)));
        }
        positive("grid.length", self.grid.length)?;
        positive("time.dt", self.time.dt)?;
        positive("time.dt_save", self.time.dt_save)?;
        nonnegative("time.duration", self.time.duration)?;
        if self.time.dt > self.time.dt_save {
            return Err(invalid("time.dt", "must not exceed time.dt_save"));
        }
        let saves = self.time.duration / self.time.dt_save;
        if (saves - saves.round()).abs() > 1e-9 * saves.max(1.0) {
            return Err(invalid("time.duration", "must be a whole number of time.dt_save intervals"));
        }
        self.validate_initial_data()?;
        let d = &self.diagnostics;
        for a in &d.concentration_amounts {
            positive("diagnostics.concentration_amounts", *a)?;
        }
        if let Some(eps) = d.r_epsilon {
            if !(eps > 0.0 && eps < 1.0) {
                return Err(invalid("diagnostics.r_epsilon", format!("must lie in (0, 1), got {eps}")));
            }
        }
        if let Some(tol) = d.radius_tolerance {
            positive("diagnostics.radius_tolerance", tol)?;
        }
        for spec in &d.norms {
            let parsed = parse_norm_spec(spec).map_err(|e| invalid("diagnostics.norms", e))?;
            parsed
                .validate(self.grid.length)
                .map_err(|e| invalid("diagnostics.norms", e.to_string()))?;
        }
        for (name, value) in [("diagnostics.decay_t_min", d.decay_t_min), ("diagnostics.decay_t_max", d.decay_t_max)] {
            if let Some(v) = value {
                nonnegative(name, v)?;
            }
        }
        Ok(())
    }

    fn validate_initial_data(&self) -> CliResult<()> {
        let kg_only = |family: &str| {
            if self.run.equation != EquationKind::Kg {
                Err(invalid("initial_data.family", format!("{family} data is defined for Klein-Gordon only")))
            } else {
                Ok(())
            }
        };
        match &self.initial_data {
            InitialData::Gaussian { amplitude, width } => {
                nonnegative("initial_data.amplitude", *amplitude)?;
                positive("initial_data.width", *width)
            }
            InitialData::MoserBump { m, rho, scale } => {
                positive("initial_data.m", *m)?;
                positive("initial_data.rho", *rho)?;
                nonnegative("initial_data.scale", *scale)
            }
            InitialData::Vn { n_cut, a } => {
                positive("initial_data.n_cut", *n_cut)?;
                positive("initial_data.a", *a)
            }
            InitialData::TravelingPacket {
                frequency,
                width,
                amplitude,
                ..
            } => {
                kg_only("traveling_packet")?;
                positive("initial_data.frequency", *frequency)?;
                positive("initial_data.width", *width)?;
                nonnegative("initial_data.amplitude", *amplitude)
            }
            InitialData::RandomSmooth {
                amplitude,
                max_frequency,
            } => {
                nonnegative("initial_data.amplitude", *amplitude)?;
                positive("initial_data.max_frequency", *max_frequency)
            }
            InitialData::File { path } => {
                if path.is_file() {
                    Ok(())
                } else {
                    Err(invalid("initial_data.path", format!("{} does not exist", path.display())))
                }
            }
        }
    }

    pub fn validate_counterexample(&self) -> CliResult<()> {
        let c = &self.counterexample;
        positive("counterexample.n_cut", c.n_cut)?;
        positive("counterexample.a", c.a)?;
        if !(c.eps > 0.0 && c.eps < 1.0) {
            return Err(invalid("counterexample.eps", format!("must lie in (0, 1), got {}", c.eps)));
        }
        for n in &c.sweep {
            positive("counterexample.sweep", *n)?;
        }
        let (p, q) = c.exponents();
        kgsl::constructions::counterexample::check_window_exponents(c.kind.equation(), p, q)
            .map_err(|e| invalid("counterexample.p", e.to_string()))?;
        if let Some(n) = c.grid_n {
            if !n.is_power_of_two() {
                return Err(invalid("counterexample.grid_n", format!("must be a power of two, got {n}")));
            }
        }
        Ok(())
    }

    pub fn validate_probe(&self) -> CliResult<()> {
        let p = &self.probe;
        if p.m.is_empty() {
            return Err(invalid("probe.m", "needs at least one value"));
        }
        for m in &p.m {
            positive("probe.m", *m)?;
        }
        positive("probe.rho", p.rho)?;
        positive("probe.lambda", p.lambda)?;
        positive("probe.length", p.length)?;
        if !(p.mu > 0.0 && p.mu <= 1.0) {
            return Err(invalid("probe.mu", format!("must lie in (0, 1], got {}", p.mu)));
        }
        if p.n < 16 || !p.n.is_power_of_two() {
            return Err(invalid("probe.n", format!("must be a power of two of at least 16, got {}", p.n)));
        }
        Ok(())
    }
}
