use std::f64::consts::TAU;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "noonsim", version, about = "N00N-state interferometry and quantum sensor sizing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact or sampled N00N fringes over a phase grid
    Fringe(FringeArgs),
    /// Fringe visibility and N00N coherence over a transmissivity grid
    #[command(name = "loss-sweep")]
    LossSweep(LossSweepArgs),
    /// Photon-number-resolved shot sampling at one phase
    Mc(McArgs),
    /// Aperture trade for one sensor design
    Size(SizeArgs),
    /// Built-in LITE vs entangled-LITE comparison
    Lite(LiteArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Fringe(_) => "fringe",
            Command::LossSweep(_) => "loss-sweep",
            Command::Mc(_) => "mc",
            Command::Size(_) => "size",
            Command::Lite(_) => "lite",
        }
    }

    pub fn output(&self) -> &OutputArgs {
        match self {
            Command::Fringe(a) => &a.output,
            Command::LossSweep(a) => &a.output,
            Command::Mc(a) => &a.output,
            Command::Size(a) => &a.output,
            Command::Lite(a) => &a.output,
        }
    }

    /// Range checks; run before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        match self {
            Command::Fringe(a) => a.validate(),
            Command::LossSweep(a) => a.validate(),
            Command::Mc(a) => a.validate(),
            Command::Size(a) => a.validate(),
            Command::Lite(_) => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write to this file instead of standard output
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn photons(n: usize) -> Result<(), CliError> {
    if n < 1 {
        return Err(usage("--n must be at least 1"));
    }
    Ok(())
}

fn transmissivity(flag: &str, eta: Option<f64>) -> Result<(), CliError> {
    match eta {
        Some(e) if !(0.0..=1.0).contains(&e) => Err(usage(format!("{flag} must be in [0, 1], got {e}"))),
        _ => Ok(()),
    }
}

fn finite(flag: &str, v: f64) -> Result<(), CliError> {
    if !v.is_finite() {
        return Err(usage(format!("{flag} must be finite, got {v}")));
    }
    Ok(())
}

fn positive(flag: &str, v: f64) -> Result<(), CliError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(usage(format!("{flag} must be positive, got {v}")));
    }
    Ok(())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FringeArgs {
    /// Photon number N of the N00N state
    #[arg(long)]
    pub n: usize,
    /// Start of the phase grid (radians, inclusive)
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi_min: f64,
    /// End of the phase grid (radians, exclusive)
    #[arg(long, default_value_t = TAU, allow_negative_numbers = true)]
    pub phi_max: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 64)]
    pub steps: usize,
    /// Equal-arm transmissivity
    #[arg(long)]
    pub eta: Option<f64>,
    /// Shots per grid point; omit for exact probabilities
    #[arg(long, requires = "seed")]
    pub shots: Option<u64>,
    /// Seed for sampled scans
    #[arg(long, requires = "shots")]
    pub seed: Option<u64>,
    /// Keep only events where all N photons were detected
    #[arg(long)]
    pub postselect: bool,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl FringeArgs {
    fn validate(&self) -> Result<(), CliError> {
        photons(self.n)?;
        finite("--phi-min", self.phi_min)?;
        finite("--phi-max", self.phi_max)?;
        if self.phi_max <= self.phi_min {
            return Err(usage("--phi-max must exceed --phi-min"));
        }
        if self.steps < 1 {
            return Err(usage("--steps must be at least 1"));
        }
        transmissivity("--eta", self.eta)?;
        if self.shots == Some(0) {
            return Err(usage("--shots must be at least 1"));
        }
        if self.postselect && self.eta == Some(0.0) {
            return Err(usage("--postselect with --eta 0 leaves no events"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LossSweepArgs {
    /// Comma-separated photon numbers, e.g. 1,2,3
    #[arg(long, value_delimiter = ',', required = true)]
    pub n_list: Vec<usize>,
    #[arg(long)]
    pub eta_min: f64,
    #[arg(long)]
    pub eta_max: f64,
    /// Number of transmissivity points, endpoints included
    #[arg(long)]
    pub eta_steps: usize,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl LossSweepArgs {
    fn validate(&self) -> Result<(), CliError> {
        if self.n_list.is_empty() {
            return Err(usage("--n-list is empty"));
        }
        for &n in &self.n_list {
            photons(n)?;
        }
        transmissivity("--eta-min", Some(self.eta_min))?;
        transmissivity("--eta-max", Some(self.eta_max))?;
        if self.eta_max < self.eta_min {
            return Err(usage("--eta-max must not be below --eta-min"));
        }
        if self.eta_steps < 1 {
            return Err(usage("--eta-steps must be at least 1"));
        }
        Ok(())
    }

    pub fn eta_grid(&self) -> Vec<f64> {
        if self.eta_steps == 1 {
            return vec![self.eta_min];
        }
        let step = (self.eta_max - self.eta_min) / (self.eta_steps - 1) as f64;
        (0..self.eta_steps)
            .map(|i| if i + 1 == self.eta_steps { self.eta_max } else { self.eta_min + i as f64 * step })
            .collect()
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct McArgs {
    #[arg(long)]
    pub n: usize,
    /// Phase on path B (radians)
    #[arg(long, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long)]
    pub shots: u64,
    #[arg(long)]
    pub seed: u64,
    /// Equal-arm transmissivity
    #[arg(long)]
    pub eta: Option<f64>,
    /// Mean dark counts per detector per shot
    #[arg(long, default_value_t = 0.0)]
    pub dark_rate: f64,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl McArgs {
    fn validate(&self) -> Result<(), CliError> {
        photons(self.n)?;
        finite("--phi", self.phi)?;
        if self.shots < 1 {
            return Err(usage("--shots must be at least 1"));
        }
        transmissivity("--eta", self.eta)?;
        if !(self.dark_rate >= 0.0 && self.dark_rate.is_finite()) {
            return Err(usage(format!("--dark-rate must be non-negative, got {}", self.dark_rate)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SizeArgs {
    /// Wavelength in meters
    #[arg(long)]
    pub wavelength: f64,
    /// Baseline aperture diameter in meters
    #[arg(long)]
    pub aperture: f64,
    /// Photon number N of the entangled design
    #[arg(long)]
    pub n: u32,
    /// Diffraction prefactor (1.22 for the Airy criterion)
    #[arg(long, default_value_t = 1.0)]
    pub prefactor: f64,
    /// Label for the baseline design
    #[arg(long, default_value = "baseline")]
    pub name: String,
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}

impl SizeArgs {
    fn validate(&self) -> Result<(), CliError> {
        positive("--wavelength", self.wavelength)?;
        positive("--aperture", self.aperture)?;
        if self.n < 1 {
            return Err(usage("--n must be at least 1"));
        }
        positive("--prefactor", self.prefactor)
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LiteArgs {
    #[command(flatten)]
    #[serde(skip)]
    pub output: OutputArgs,
}
