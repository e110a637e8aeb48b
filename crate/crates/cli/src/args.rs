use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use modvar::states::FarFieldMode;
use modvar::witnesses::{Criterion, Pairing, SteeringDirection};

#[derive(Debug, Parser)]
#[command(name = "modvar", version, about = "Entanglement and EPR-steering witnesses in modular variables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub shared: Shared,
}

/// Flags accepted by every subcommand.
#[derive(Debug, Args)]
pub struct Shared {
    /// Scale factor ℓ in mm.
    #[arg(long, global = true)]
    pub ell: Option<f64>,

    /// Remainder bins per modular period.
    #[arg(long, global = true, default_value_t = modvar::modular::DEFAULT_BINS)]
    pub bins: usize,

    /// Simulation cells per axis (a multiple of 16).
    #[arg(long, global = true, default_value_t = 1024)]
    pub grid: usize,

    /// Seed for Poisson noise and resampling.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write ideal D-slit near- and far-field coincidence maps.
    Simulate(SimulateArgs),
    /// Evaluate entanglement witnesses on a near/far map pair.
    Witness(WitnessArgs),
    /// Evaluate both EPR-steering criteria.
    Steer(SteerArgs),
    /// Compute the constant C of the variance criteria.
    ConstantC(ConstantArgs),
    /// Coarse-grained entropic witness as a function of ℓ/d.
    ScanEll(ScanArgs),
    /// Poisson error bar for one criterion.
    Resample(ResampleArgs),
}

#[derive(Debug, Args)]
pub struct OpticsArgs {
    /// Near-field imaging magnification.
    #[arg(long, default_value_t = 3.6)]
    pub magnification: f64,
    /// Far-field lens focal length in mm.
    #[arg(long, default_value_t = 300.0)]
    pub focal_mm: f64,
    #[arg(long, default_value_t = 810.0)]
    pub wavelength_nm: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, default_value_t = 2)]
    pub slits: usize,
    /// Slit width in mm; defaults to the experimental aperture.
    #[arg(long)]
    pub width: Option<f64>,
    /// Slit separation in mm; defaults to the experimental aperture.
    #[arg(long)]
    pub sep: Option<f64>,
    #[arg(long)]
    pub out_near: PathBuf,
    #[arg(long)]
    pub out_far: PathBuf,
    /// Expected number of coincidences per map.
    #[arg(long, default_value_t = 100_000_000)]
    pub total: u64,
    #[arg(long, value_enum, default_value_t = FarMode::Comb)]
    pub far_mode: FarMode,
    /// Fraction of uniform background mixed into the near field.
    #[arg(long, default_value_t = 0.0)]
    pub background: f64,
    /// Draw counts from a Poisson law instead of rounding expectations.
    #[arg(long)]
    pub poisson: bool,
    #[command(flatten)]
    pub optics: OpticsArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FarMode {
    Comb,
    Physical,
}

impl From<FarMode> for FarFieldMode {
    fn from(m: FarMode) -> Self {
        match m {
            FarMode::Comb => FarFieldMode::Comb,
            FarMode::Physical => FarFieldMode::Physical,
        }
    }
}

#[derive(Debug, Args)]
pub struct Inputs {
    /// Near-field coincidence CSV.
    #[arg(long)]
    pub near: PathBuf,
    /// Far-field coincidence CSV.
    #[arg(long)]
    pub far: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    VarEnt,
    EntEnt,
    VarSteer,
    EntSteer,
    CoarseGrained,
}

impl From<CriterionArg> for Criterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::VarEnt => Criterion::VarEnt,
            CriterionArg::EntEnt => Criterion::EntEnt,
            CriterionArg::VarSteer => Criterion::VarSteer,
            CriterionArg::EntSteer => Criterion::EntSteer,
            CriterionArg::CoarseGrained => Criterion::CoarseGrained,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairingArg {
    #[value(name = "N-S+")]
    NMinusSPlus,
    #[value(name = "N+S-")]
    NPlusSMinus,
}

impl From<PairingArg> for Pairing {
    fn from(p: PairingArg) -> Self {
        match p {
            PairingArg::NMinusSPlus => Pairing::NMinusSPlus,
            PairingArg::NPlusSMinus => Pairing::NPlusSMinus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    FirstFromSecond,
    SecondFromFirst,
}

impl From<DirectionArg> for SteeringDirection {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::FirstFromSecond => SteeringDirection::FirstFromSecond,
            DirectionArg::SecondFromFirst => SteeringDirection::SecondFromFirst,
        }
    }
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Criteria to evaluate, comma separated.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [CriterionArg::VarEnt, CriterionArg::EntEnt])]
    pub criterion: Vec<CriterionArg>,
    #[arg(long, value_enum, default_value_t = PairingArg::NMinusSPlus)]
    pub pairing: PairingArg,
    /// Slit separation for the coarse-grained criterion; defaults to ℓ.
    #[arg(long)]
    pub sep: Option<f64>,
    /// Truncation of the eigenproblem for C.
    #[arg(long, default_value_t = modvar::spectral::DEFAULT_NMAX)]
    pub nmax: usize,
    /// Poisson resampling trials for error bars; 0 disables them.
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    /// Bar chart of the violations.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SteerArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long, value_enum, default_value_t = DirectionArg::FirstFromSecond)]
    pub direction: DirectionArg,
    #[arg(long, default_value_t = modvar::spectral::DEFAULT_NMAX)]
    pub nmax: usize,
    #[arg(long, default_value_t = 0)]
    pub trials: usize,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConstantArgs {
    #[arg(long, default_value_t = modvar::spectral::DEFAULT_NMAX)]
    pub nmax: usize,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Slit separation d in mm.
    #[arg(long)]
    pub sep: f64,
    #[arg(long, default_value_t = 0.5)]
    pub from: f64,
    #[arg(long, default_value_t = 2.0)]
    pub to: f64,
    #[arg(long, default_value_t = 0.025)]
    pub step: f64,
    #[arg(long, value_enum, default_value_t = PairingArg::NMinusSPlus)]
    pub pairing: PairingArg,
    /// Curve data as `ratio,violation` CSV.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ResampleArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    #[arg(long, value_enum, default_value_t = CriterionArg::EntEnt)]
    pub criterion: CriterionArg,
    #[arg(long, value_enum, default_value_t = PairingArg::NMinusSPlus)]
    pub pairing: PairingArg,
    #[arg(long, value_enum, default_value_t = DirectionArg::FirstFromSecond)]
    pub direction: DirectionArg,
    #[arg(long)]
    pub sep: Option<f64>,
    #[arg(long, default_value_t = modvar::spectral::DEFAULT_NMAX)]
    pub nmax: usize,
    #[arg(long, default_value_t = 100)]
    pub trials: usize,
}
