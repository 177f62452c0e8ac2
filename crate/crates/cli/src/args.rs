use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mttf_trend::TestId;

#[derive(Debug, Parser)]
#[command(
    name = "mttf-trend",
    version,
    about = "Tests of exponentiality against a trend change in mean time to failure"
)]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Markdown,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CalibrationMode {
    Analytic,
    Mc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TailArg {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AltKind {
    ExpPower,
    Lognormal,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test one sample for a trend change in MTTF.
    Test(TestArgs),
    /// Critical values, analytic or simulated under the exponential null.
    Critical(CriticalArgs),
    /// Empirical size of γ* and κ* against the analytic critical points.
    Size(SizeArgs),
    /// Power against exponential-power or lognormal alternatives.
    Power(PowerArgs),
    /// Empirical MTTF under age replacement at each order statistic.
    Mttf(MttfArgs),
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// gamma, kappa, na-t, na-u or aarset.
    #[arg(long = "test")]
    pub test: TestId,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Default: Monte Carlo for n < 100 (always for na-t, na-u, aarset), analytic otherwise.
    #[arg(long, value_enum)]
    pub calibration: Option<CalibrationMode>,
    /// Null replications for Monte Carlo calibration.
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Which tail of G_n rejects (upper: BFR, lower: UBFR).
    #[arg(long, value_enum, default_value_t = TailArg::Upper)]
    pub tail: TailArg,
}

#[derive(Debug, Args)]
pub struct CriticalArgs {
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.025, 0.05, 0.1])]
    pub alpha_list: Vec<f64>,
    /// Sample sizes to simulate (default 10, 15, …, 70).
    #[arg(long = "n", value_delimiter = ',', conflicts_with = "asymptotic")]
    pub n: Vec<usize>,
    /// Only the n → ∞ analytic points (γ* and κ*).
    #[arg(long)]
    pub asymptotic: bool,
    #[arg(long, value_delimiter = ',', default_values_t = [TestId::GammaStar, TestId::KappaStar])]
    pub tests: Vec<TestId>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    /// Required unless --asymptotic.
    #[arg(long, required_unless_present = "asymptotic")]
    pub seed: Option<u64>,
    #[command(flatten)]
    pub guard: Guard,
}

#[derive(Debug, Args)]
pub struct SizeArgs {
    /// Default 10, 15, …, 70, 100, 200.
    #[arg(long = "n", value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.025, 0.05, 0.1])]
    pub alpha_list: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [TestId::GammaStar, TestId::KappaStar])]
    pub tests: Vec<TestId>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub guard: Guard,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    #[arg(long, value_enum)]
    pub alt: AltKind,
    /// Shape values: β for exp-power, σ for lognormal.
    #[arg(long, value_delimiter = ',', required = true)]
    pub params: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    pub mu: f64,
    /// Default: γ*, G_n, T* for exp-power; κ*, G_n, U* for lognormal.
    #[arg(long, value_delimiter = ',')]
    pub tests: Vec<TestId>,
    /// Tail of G_n; defaults to the side matching the alternative.
    #[arg(long, value_enum)]
    pub tail: Option<TailArg>,
    /// Default 10, 20, …, 60.
    #[arg(long = "n", value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.01, 0.05, 0.1])]
    pub alpha_list: Vec<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = CalibrationMode::Mc)]
    pub calibration: CalibrationMode,
    /// Null replications for the G_n pmf.
    #[arg(long, default_value_t = mttf_trend::experiment::DEFAULT_AARSET_NULL_REPLICATIONS)]
    pub aarset_reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub guard: Guard,
}

#[derive(Debug, Args)]
pub struct MttfArgs {
    #[arg(long)]
    pub input: PathBuf,
    /// Also evaluate the estimator at these ages.
    #[arg(long, value_delimiter = ',')]
    pub at: Vec<f64>,
}

#[derive(Debug, Args)]
pub struct Guard {
    /// Permit runs with replications × max n above 10⁹.
    #[arg(long)]
    pub allow_large: bool,
}
