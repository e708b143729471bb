//! Command-line interface: every subcommand reads an optional `--config`
//! file and applies its flags on top.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use kgsl::field::norm;

use crate::config::{
    EquationKind, ExperimentConfig, InitialData, NonlinearityKind, ProbeFamily, ProbeScaling,
};
use crate::error::{CliError, CliResult};
use crate::normspec::parse_norm_spec;
use crate::probes;
use crate::runner::simulate;
use crate::snapshot::SnapshotFile;

#[derive(Debug, Parser)]
#[command(name = "kgsl", version, about = "Spectral laboratory for 2D Klein-Gordon and Schrödinger equations")]
pub struct Cli {
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evolve the configured initial data and write snapshots, diagnostics and a summary.
    Simulate(SimArgs),
    /// Bound table and growth sweep of the logarithmic counterexample.
    Counterexample(CounterexampleArgs),
    /// Trudinger-Moser functional along the Moser family.
    ProbeTm(ProbeArgs),
    /// Logarithmic L-infinity inequality along the Moser family.
    ProbeLog(ProbeArgs),
    /// Print one norm of a snapshot field.
    Norms(NormsArgs),
    /// Simulate and attach the scattering analysis.
    ScatterReport(SimArgs),
    /// Simulate and fit the decay of the B^0_{∞,2} norm.
    DecayFit(DecayArgs),
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub equation: Option<EquationKind>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Box length.
    #[arg(long = "L", visible_alias = "length")]
    pub length: Option<f64>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Final time.
    #[arg(long = "T", visible_alias = "duration", conflicts_with = "saves")]
    pub duration: Option<f64>,
    /// Final time as a number of save intervals.
    #[arg(long)]
    pub saves: Option<u32>,
    #[arg(long)]
    pub dt_save: Option<f64>,
    #[arg(long, value_enum)]
    pub nonlinearity: Option<NonlinearityKind>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Start from a snapshot file.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
    #[arg(long)]
    pub no_snapshots: bool,
}

#[derive(Debug, Args)]
pub struct DecayArgs {
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long)]
    pub t_min: Option<f64>,
    #[arg(long)]
    pub t_max: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CounterexampleArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub kind: Option<EquationKind>,
    /// Cutoff of the bound table.
    #[arg(long = "N")]
    pub n_cut: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    /// Comma-separated cutoffs of the growth sweep.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Option<Vec<f64>>,
    #[arg(long)]
    pub no_contrast: bool,
    #[arg(long)]
    pub grid_n: Option<usize>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub family: Option<ProbeFamily>,
    /// Bump parameters: a range `1..6` or a list `1,2,4`.
    #[arg(long, value_parser = parse_m_values)]
    pub m: Option<MValues>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, value_enum)]
    pub scaling: Option<ProbeScaling>,
    /// Target `‖∇φ‖^2` of the gradient scaling.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "L", visible_alias = "length")]
    pub length: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// `λ` of the logarithmic inequality.
    #[arg(long)]
    pub log_lambda: Option<f64>,
    #[arg(long)]
    pub output_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MValues(pub Vec<f64>);

fn parse_m_values(text: &str) -> Result<MValues, String> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: i64 = lo.trim().parse().map_err(|_| format!("bad range start in '{text}'"))?;
        let hi: i64 = hi.trim().parse().map_err(|_| format!("bad range end in '{text}'"))?;
        if hi < lo {
            return Err(format!("empty range '{text}'"));
        }
        return Ok(MValues((lo..=hi).map(|m| m as f64).collect()));
    }
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("cannot parse '{t}'")))
        .collect::<Result<Vec<_>, _>>()
        .map(MValues)
}

#[derive(Debug, Args)]
pub struct NormsArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub input: PathBuf,
    /// Norm spec such as `besov:0.25,inf,2`.
    #[arg(long)]
    pub spec: String,
    /// Field of the snapshot (0 = u, 1 = u̇).
    #[arg(long, default_value_t = 0)]
    pub field: usize,
}

fn base_config(path: &Option<PathBuf>) -> CliResult<ExperimentConfig> {
    match path {
        Some(p) => ExperimentConfig::load(p),
        None => Ok(ExperimentConfig::default()),
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

impl SimArgs {
    pub fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut c = base_config(&self.config)?;
        set(&mut c.run.equation, self.equation);
        set(&mut c.run.seed, self.seed);
        set(&mut c.grid.n, self.n);
        set(&mut c.grid.length, self.length);
        set(&mut c.time.dt, self.dt);
        set(&mut c.time.dt_save, self.dt_save);
        set(&mut c.time.duration, self.duration);
        if let Some(k) = self.saves {
            c.time.duration = c.time.dt_save * f64::from(k);
        }
        if let Some(kind) = self.nonlinearity {
            c.nonlinearity.kind = kind;
        }
        if let Some(path) = &self.input {
            c.initial_data = InitialData::File { path: path.clone() };
        }
        if self.output_dir.is_some() {
            c.output.dir = self.output_dir.clone();
        }
        if self.no_snapshots {
            c.output.snapshots = false;
        }
        Ok(c)
    }
}

impl CounterexampleArgs {
    pub fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut c = base_config(&self.config)?;
        let s = &mut c.counterexample;
        set(&mut s.kind, self.kind);
        set(&mut s.n_cut, self.n_cut);
        set(&mut s.a, self.a);
        set(&mut s.eps, self.eps);
        if self.p.is_some() {
            s.p = self.p;
        }
        if self.q.is_some() {
            s.q = self.q;
        }
        set(&mut s.sweep, self.sweep.clone());
        if self.no_contrast {
            s.contrast = false;
        }
        if self.grid_n.is_some() {
            s.grid_n = self.grid_n;
        }
        if self.output_dir.is_some() {
            c.output.dir = self.output_dir.clone();
        }
        Ok(c)
    }
}

impl ProbeArgs {
    pub fn resolve(&self) -> CliResult<ExperimentConfig> {
        let mut c = base_config(&self.config)?;
        let p = &mut c.probe;
        set(&mut p.family, self.family);
        set(&mut p.m, self.m.clone().map(|m| m.0));
        set(&mut p.rho, self.rho);
        set(&mut p.mu, self.mu);
        set(&mut p.scaling, self.scaling);
        set(&mut p.lambda, self.lambda);
        set(&mut p.n, self.n);
        set(&mut p.length, self.length);
        set(&mut p.log_alpha, self.alpha);
        set(&mut p.log_lambda, self.log_lambda);
        if self.output_dir.is_some() {
            c.output.dir = self.output_dir.clone();
        }
        Ok(c)
    }
}

/// What a finished subcommand reports back to `main`.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    /// Text for standard output.
    pub message: Option<String>,
    /// The simulation stopped at a blow-up.
    pub truncated: bool,
}

fn outcome_of(run: crate::runner::RunOutcome) -> Outcome {
    Outcome {
        message: Some(format!("wrote {}", run.dir.display())),
        truncated: run.truncated,
    }
}

pub fn execute(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Simulate(args) => Ok(outcome_of(simulate(&args.resolve()?, "simulate")?)),
        Command::ScatterReport(args) => {
            let mut config = args.resolve()?;
            config.diagnostics.scattering = true;
            Ok(outcome_of(simulate(&config, "scatter-report")?))
        }
        Command::DecayFit(args) => {
            let mut config = args.sim.resolve()?;
            if args.t_min.is_some() {
                config.diagnostics.decay_t_min = args.t_min;
            }
            if args.t_max.is_some() {
                config.diagnostics.decay_t_max = args.t_max;
            }
            if config.diagnostics.decay_t_min.is_none() {
                config.diagnostics.decay_t_min = Some(config.time.duration / 2.0);
            }
            Ok(outcome_of(simulate(&config, "decay-fit")?))
        }
        Command::Counterexample(args) => {
            let config = args.resolve()?;
            probes::counterexample(&config)?;
            Ok(Outcome {
                message: Some(format!("wrote {}", config.output_dir().display())),
                truncated: false,
            })
        }
        Command::ProbeTm(args) => {
            let config = args.resolve()?;
            probes::probe_tm(&config)?;
            Ok(Outcome {
                message: Some(format!("wrote {}", config.output_dir().display())),
                truncated: false,
            })
        }
        Command::ProbeLog(args) => {
            let config = args.resolve()?;
            probes::probe_log(&config)?;
            Ok(Outcome {
                message: Some(format!("wrote {}", config.output_dir().display())),
                truncated: false,
            })
        }
        Command::Norms(args) => {
            if let Some(path) = &args.config {
                ExperimentConfig::load(path)?;
            }
            let spec = parse_norm_spec(&args.spec).map_err(|message| CliError::Config {
                field: "--spec".into(),
                message,
            })?;
            let snap = SnapshotFile::read(&args.input)?;
            let value = norm(&snap.field(args.field)?, spec)?;
            Ok(Outcome {
                message: Some(format!("{value}")),
                truncated: false,
            })
        }
    }
}
