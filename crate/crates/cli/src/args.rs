//! Command-line grammar and its resolution into a [`RunConfig`].

use std::f64::consts::PI;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use j1j2_core::{ModelParams, Regime};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::sweep::GridSpec;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "J1J2_OUT_DIR";

#[derive(Debug, Parser)]
#[command(name = "j1j2", version, about = "Integrable anisotropic J1-J2 spin chain laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// R-matrix, transfer-matrix and Hamiltonian consistency residuals.
    Verify(VerifyArgs),
    /// Exact diagonalization spectrum.
    Ed(EdArgs),
    /// Bethe ansatz solutions in every magnon sector.
    Bae(BaeArgs),
    /// Thermodynamic-limit ground-state root density.
    ThermoDensity(DensityArgs),
    /// Two-spinon excitation energies and momenta.
    Dispersion(DispersionArgs),
    /// Excitation gap of the imaginary-eta regime over a grid of a.
    Gap(GapArgs),
    /// Reality of the nonhermitian spectrum over a grid of a.
    RealityScan(RealityArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RegimeArg {
    RealEta,
    ImagEta,
    Nonhermitian,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::RealEta => Regime::RealEtaHermitian,
            RegimeArg::ImagEta => Regime::ImagEtaHermitian,
            RegimeArg::Nonhermitian => Regime::Nonhermitian,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Number of sites 2N (even, at least 4).
    #[arg(long, default_value_t = 4)]
    pub sites: usize,
    /// Coupling regime; inferred from the other flags when omitted.
    #[arg(long, value_enum)]
    pub regime: Option<RegimeArg>,
    /// Real anisotropy (real-eta and nonhermitian regimes).
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Imaginary anisotropy eta = i gamma (imag-eta regime).
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<f64>,
    /// Inhomogeneity a = i b (real-eta regime).
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<f64>,
    /// Real inhomogeneity a (imag-eta and nonhermitian regimes).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; defaults to `<command>.<format>` in $J1J2_OUT_DIR or the
    /// working directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Random spectral-parameter draws per check.
    #[arg(long, default_value_t = 10)]
    pub draws: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Pass threshold for every residual.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct EdArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Level-grouping tolerance relative to the spectral radius.
    #[arg(long, default_value_t = j1j2_core::spectrum::LEVEL_RTOL)]
    pub level_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BaeArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Solve only this magnon number (default: every M from 0 to N).
    #[arg(long)]
    pub magnons: Option<usize>,
    /// Random Newton starts per magnon number.
    #[arg(long, default_value_t = 200)]
    pub seeds: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Level tolerance (relative to the spectral radius) for matching
    /// against exact diagonalization.
    #[arg(long, default_value_t = j1j2_core::spectrum::LEVEL_RTOL)]
    pub level_tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long, default_value_t = 401)]
    pub samples: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeArg {
    /// Both holes at the same rapidity.
    Diagonal,
    /// Every unordered pair of sampled rapidities.
    Pairs,
    /// Every unordered pair of holes spaced evenly in single-hole momentum.
    Envelope,
}

#[derive(Debug, Clone, Args)]
pub struct DispersionArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Hole rapidities sampled over the window.
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Diagonal)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct AGridArgs {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub a_start: f64,
    #[arg(long, default_value_t = PI, allow_hyphen_values = true)]
    pub a_stop: f64,
    #[arg(long, default_value_t = 0.01)]
    pub a_step: f64,
}

impl AGridArgs {
    pub fn spec(&self) -> GridSpec {
        GridSpec { start: self.a_start, stop: self.a_stop, step: self.a_step }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GapArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: f64,
    #[command(flatten)]
    pub grid: AGridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RealityArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub eta: f64,
    #[arg(long, default_value_t = 6)]
    pub sites: usize,
    #[command(flatten)]
    pub grid: AGridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Fully resolved settings of one run, stored with its results.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub model: Option<ModelParams>,
    pub grid: Option<GridSpec>,
    pub samples: Option<usize>,
    pub mode: Option<ModeArg>,
    pub magnons: Option<usize>,
    pub seed: Option<u64>,
    pub seeds: Option<usize>,
    pub draws: Option<usize>,
    pub tol: Option<f64>,
    pub format: Format,
    pub out: PathBuf,
}

impl RunConfig {
    pub fn new(command: &str, output: &OutputArgs) -> CliResult<Self> {
        Ok(Self {
            command: command.to_string(),
            model: None,
            grid: None,
            samples: None,
            mode: None,
            magnons: None,
            seed: None,
            seeds: None,
            draws: None,
            tol: None,
            format: output.format,
            out: output_path(command, output)?,
        })
    }
}

fn output_path(command: &str, output: &OutputArgs) -> CliResult<PathBuf> {
    if let Some(p) = &output.out {
        return Ok(p.clone());
    }
    let dir = match std::env::var_os(OUT_DIR_ENV) {
        Some(d) if !d.is_empty() => PathBuf::from(d),
        _ => PathBuf::from("."),
    };
    Ok(dir.join(format!("{command}.{}", output.format.extension())))
}

impl ModelArgs {
    /// Checks the flags against the regime (given or inferred) and builds the
    /// parameters.
    pub fn resolve(&self) -> CliResult<ModelParams> {
        let regime = match self.regime {
            Some(r) => r,
            None if self.gamma.is_some() => RegimeArg::ImagEta,
            None if self.b.is_some() => RegimeArg::RealEta,
            None if self.eta.is_some() && self.a.is_some() => RegimeArg::Nonhermitian,
            None => {
                return Err(CliError::Usage(
                    "cannot infer the regime: give --regime or one of --gamma, --b, --eta with --a".into(),
                ))
            }
        };
        let forbid = |flag: &str, present: bool| -> CliResult<()> {
            if present {
                Err(CliError::Usage(format!("--{flag} is not a parameter of the {regime:?} regime")))
            } else {
                Ok(())
            }
        };
        let need = |flag: &str, v: Option<f64>| -> CliResult<f64> {
            v.ok_or_else(|| CliError::Usage(format!("--{flag} is required for the {regime:?} regime")))
        };
        let (anis, inh) = match regime {
            RegimeArg::RealEta => {
                forbid("gamma", self.gamma.is_some())?;
                forbid("a", self.a.is_some())?;
                (need("eta", self.eta)?, self.b.unwrap_or(0.0))
            }
            RegimeArg::ImagEta => {
                forbid("eta", self.eta.is_some())?;
                forbid("b", self.b.is_some())?;
                (need("gamma", self.gamma)?, self.a.unwrap_or(0.0))
            }
            RegimeArg::Nonhermitian => {
                forbid("gamma", self.gamma.is_some())?;
                forbid("b", self.b.is_some())?;
                (need("eta", self.eta)?, need("a", self.a)?)
            }
        };
        Ok(ModelParams::new(self.sites, regime.into(), anis, inh)?)
    }
}
