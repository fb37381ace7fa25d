//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "amphase", version, about = "Verification suites for the amplitude-phase representation")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that K vanishes over seeded random solutions.
    VerifyK(VerifyKArgs),
    /// Solve the variable-phase counterexample and test calK.
    Counterexample(CounterexampleArgs),
    /// Solve the Milne equation and cross-check it against a solution pair.
    MilneSolve(MilneArgs),
    /// Solve the linear equation for one complex solution.
    SchrodingerSolve(SchrodingerArgs),
    /// Run a parameter grid of counterexample or K cases.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialKind {
    Free,
    Constant,
    Harmonic,
    Linear,
    Tabulated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodName {
    Rk4,
    Dp45,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepOver {
    Counterexample,
    Potential,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x_start: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub x_end: Option<f64>,
    #[arg(long)]
    pub n_points: Option<usize>,
    #[arg(long, value_enum, default_value_t = MethodName::Rk4)]
    pub method: MethodName,
    /// Upper bound on the integrator step (substeps for rk4).
    #[arg(long)]
    pub max_step: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Report destination; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override the differential-equation residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct PotentialArgs {
    #[arg(long, value_enum, default_value_t = PotentialKind::Free)]
    pub potential: PotentialKind,
    /// Energy; defaults to 0 for the linear potential and 0.5 otherwise.
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<f64>,
    /// Height of the constant potential.
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub v0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub slope: f64,
    /// Two-column csv (x, V) on a uniform grid, with a header row.
    #[arg(long)]
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyKArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Number of random initial conditions.
    #[arg(long, default_value_t = 20)]
    pub cases: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Negative control: pair psi with a Milne amplitude of constant 2c.
    #[arg(long)]
    pub inconsistent: bool,
    /// Number of grid halvings used to estimate convergence orders.
    #[arg(long, default_value_t = 0)]
    pub refine: usize,
}

#[derive(Debug, Clone, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c1: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s0: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub ds0: f64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Write x, S, S', k^2, Re calK, Im calK to this csv file.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MilneArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// Amplitude at x-start.
    #[arg(long, default_value_t = 1.0)]
    pub u0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub du0: f64,
    /// Milne constant.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub c: f64,
    /// Write x, u, u' to this csv file.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SchrodingerArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
    /// psi at the grid centre as `re,im`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [1.0, 0.0], allow_hyphen_values = true)]
    pub psi0: Vec<f64>,
    /// psi' at the grid centre as `re,im`.
    #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.0, 1.0], allow_hyphen_values = true)]
    pub dpsi0: Vec<f64>,
    /// Write x, Re psi, Im psi, Re psi', Im psi', |psi| to this csv file.
    #[arg(long)]
    pub samples: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = SweepOver::Counterexample)]
    pub over: SweepOver,
    /// Comma-separated values.
    #[arg(long, value_delimiter = ',', default_values_t = [1.0], allow_hyphen_values = true)]
    pub c1: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.0], allow_hyphen_values = true)]
    pub s0: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.5], allow_hyphen_values = true)]
    pub ds0: Vec<f64>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [PotentialKind::Free])]
    pub potential: Vec<PotentialKind>,
    /// Energies; the per-potential default when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub energy: Vec<f64>,
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub v0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub slope: f64,
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub grid: GridArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
