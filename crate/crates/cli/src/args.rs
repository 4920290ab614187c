use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "amk", version, about = "Error probabilities and receiver comparisons for binary AMK optical channels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Error probability of one or all receivers at a single energy.
    Pe(PeArgs),
    /// Tabulate quantities over a one-dimensional parameter grid.
    Sweep(SweepArgs),
    /// Crossover energies and best-receiver regimes.
    Threshold(ThresholdArgs),
    /// Compare a closed form against its independent oracle.
    Verify(VerifyArgs),
}

/// A value that may be resolved automatically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Auto {
    Auto,
    Value(f64),
}

impl FromStr for Auto {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(Auto::Auto);
        }
        s.parse::<f64>()
            .map(Auto::Value)
            .map_err(|_| format!("expected a number or 'auto', got '{s}'"))
    }
}

impl fmt::Display for Auto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Auto::Auto => f.write_str("auto"),
            Auto::Value(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    /// Detector efficiency for every receiver, unless overridden below.
    #[arg(long, default_value_t = 1.0)]
    pub eta: f64,
    #[arg(long)]
    pub eta_ken: Option<f64>,
    #[arg(long)]
    pub eta_hom: Option<f64>,
    #[arg(long)]
    pub eta_het: Option<f64>,
    /// Loss `Γt` accumulated in propagation.
    #[arg(long = "gamma-t", default_value_t = 0.0)]
    pub gamma_t: f64,
    /// Thermal photons of the environment.
    #[arg(long, default_value_t = 0.0)]
    pub m: f64,
    /// Beam-splitter transmissivity of the direct receiver.
    #[arg(long, default_value_t = 0.99)]
    pub transmissivity: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReceiverChoice {
    Direct,
    Homodyne,
    Heterodyne,
    Helstrom,
    All,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct PeArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub receiver: ReceiverChoice,
    /// Channel energy `N`.
    #[arg(long)]
    pub n: f64,
    /// Twin-beam fraction for the heterodyne receiver.
    #[arg(long, default_value = "auto")]
    pub beta: Auto,
    /// Homodyne decision threshold.
    #[arg(long, default_value = "auto")]
    pub lambda_threshold: Auto,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variable {
    N,
    Eta,
    #[value(name = "gamma-t")]
    GammaT,
    M,
    Beta,
}

impl Variable {
    pub fn column(&self) -> &'static str {
        match self {
            Variable::N => "n",
            Variable::Eta => "eta",
            Variable::GammaT => "gamma_t",
            Variable::M => "m",
            Variable::Beta => "beta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    Ke,
    He,
    Re,
    Pe,
    Qe,
    BetaOpt,
    BetaS,
    #[value(name = "a_e")]
    AE,
    #[value(name = "b_e")]
    BE,
    #[value(name = "c_e")]
    CE,
    #[value(name = "n_th")]
    NTh,
    SigmaMinusSq,
}

impl Quantity {
    pub fn column(&self) -> &'static str {
        match self {
            Quantity::Ke => "ke",
            Quantity::He => "he",
            Quantity::Re => "re",
            Quantity::Pe => "pe",
            Quantity::Qe => "qe",
            Quantity::BetaOpt => "beta_opt",
            Quantity::BetaS => "beta_s",
            Quantity::AE => "a_e",
            Quantity::BE => "b_e",
            Quantity::CE => "c_e",
            Quantity::NTh => "n_th",
            Quantity::SigmaMinusSq => "sigma_minus_sq",
        }
    }
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value = "n")]
    pub variable: Variable,
    #[arg(long)]
    pub start: f64,
    #[arg(long)]
    pub stop: f64,
    #[arg(long, default_value_t = 100)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "linear")]
    pub scale: Scale,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "ke,he,re,pe")]
    pub quantities: Vec<Quantity>,
    /// Channel energy when it is not the swept variable.
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    #[arg(long, default_value = "auto")]
    pub beta: Auto,
    /// Scan range for `n_th`.
    #[arg(long, default_value_t = 30.0)]
    pub n_max: f64,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PairChoice {
    #[value(name = "hom-vs-direct")]
    HomVsDirect,
    #[value(name = "het-vs-direct")]
    HetVsDirect,
    #[value(name = "het-vs-hom")]
    HetVsHom,
    All,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ThresholdArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub pair: PairChoice,
    #[arg(long, default_value_t = 30.0)]
    pub n_max: f64,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Helstrom,
    Direct,
    #[value(name = "beta-opt")]
    BetaOpt,
    Homodyne,
    Heterodyne,
    #[value(name = "direct-mc")]
    DirectMc,
    Separability,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub target: Target,
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    /// Fock truncation per mode.
    #[arg(long, default_value_t = 40)]
    pub dim: usize,
    #[arg(long, default_value_t = 1_000_000)]
    pub shots: u64,
    #[arg(long, env = "AMK_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value = "auto")]
    pub beta: Auto,
    #[arg(long, default_value = "auto")]
    pub lambda_threshold: Auto,
    /// Check the commonly printed closed form instead of the derived one.
    #[arg(long)]
    pub as_printed: bool,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
