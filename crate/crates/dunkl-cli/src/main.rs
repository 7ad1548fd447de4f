//! Batch computations for Wigner-Dunkl quantum mechanics.
//!
//! Every subcommand reads parameters from flags and an optional key-value
//! config file (flags win), runs the computation, and emits CSV or JSON with
//! the resolved configuration embedded, so runs are reproducible from their
//! artifacts. Exit codes: 0 success, 1 failed checks, 2 config error,
//! 3 domain error, 4 I/O error.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Domain(dunkl::DunklError),
    Io(std::io::Error),
    ChecksFailed(usize),
}

impl From<dunkl::DunklError> for CliError {
    fn from(e: dunkl::DunklError) -> CliError {
        CliError::Domain(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Domain(e) => write!(f, "domain error: {e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

#[derive(Parser)]
#[command(name = "dunkl", about = "Wigner-Dunkl quantum mechanics computations", version)]
struct Cli {
    /// Key-value config file; flags override its entries.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output path (stdout when omitted).
    #[arg(long, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct KernelArgs {
    /// Deformation parameter ν > −1/2.
    #[arg(long)]
    nu: Option<f64>,
    /// Axis of evaluation: real or imag.
    #[arg(long)]
    axis: Option<String>,
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct TransformArgs {
    #[arg(long)]
    nu: Option<f64>,
    /// Built-in input: gaussian or x-gaussian (ignored with --input).
    #[arg(long)]
    function: Option<String>,
    /// Width parameter of the built-in function: exp(−αx²/2).
    #[arg(long)]
    alpha: Option<f64>,
    /// CSV of samples (columns node, re, im) transformed by trapezoid rule.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Compute the inverse transform instead.
    #[arg(long)]
    inverse: bool,
    #[arg(long)]
    k_max: Option<f64>,
    #[arg(long)]
    k_points: Option<usize>,
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct EvolveArgs {
    #[arg(long)]
    nu: Option<f64>,
    /// Initial width parameter β of exp(−βx²/2).
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct PropagateArgs {
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Source point y.
    #[arg(long)]
    y: Option<f64>,
    /// Oscillator frequency; omit for the free propagator.
    #[arg(long)]
    omega: Option<f64>,
    /// Relative imaginary mass regularizer.
    #[arg(long)]
    eps_m: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct TrotterArgs {
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    t: Option<f64>,
    /// Comma-separated slice counts, e.g. 8,16,32,64.
    #[arg(long)]
    schedule: Option<String>,
    /// Short-time scheme: exact or naive.
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    eps_m: Option<f64>,
    /// Grid half-width L.
    #[arg(long)]
    grid_l: Option<f64>,
    #[arg(long)]
    panel_width: Option<f64>,
    #[arg(long)]
    nodes_per_panel: Option<usize>,
    /// Comparison window |x|,|y| ≤ window.
    #[arg(long)]
    window: Option<f64>,
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct HeatArgs {
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    /// Oscillator frequency; omit for the free heat kernel.
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// Also emit the sector-decomposition residual per row.
    #[arg(long)]
    decomposition: bool,
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct McArgs {
    /// fk (Feynman-Kac pairing) or index-change (Radon-Nikodym check).
    #[arg(long)]
    mode: Option<String>,
    /// Potential: zero or ho.
    #[arg(long)]
    potential: Option<String>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    y: Option<f64>,
    #[arg(long)]
    paths: Option<u64>,
    #[arg(long)]
    steps_per_unit_tau: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<u64>,
    /// Width of the Gaussian terminal test function exp(−βx²/2).
    #[arg(long)]
    test_beta: Option<f64>,
    /// Index pair for index-change mode.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta_index: Option<f64>,
}

#[derive(Args, Debug, Default)]
#[command(allow_negative_numbers = true)]
struct CheckArgs {
    /// kernels, transforms, dynamics, densities or all.
    #[arg(long)]
    suite: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Point evaluation of the deformed exponential kernel.
    Kernel(KernelArgs),
    /// Dunkl transform (or inverse) of a test function or sampled CSV.
    Transform(TransformArgs),
    /// Gaussian wave-packet density |Ψ(x,t)|².
    Evolve(EvolveArgs),
    /// Free or harmonic propagator tables.
    Propagate(PropagateArgs),
    /// Time-sliced composition convergence tables.
    Trotter(TrotterArgs),
    /// Euclidean heat-kernel tables.
    Heat(HeatArgs),
    /// Feynman-Kac Monte Carlo estimates (JSON).
    Mc(McArgs),
    /// Property-check suites with a pass/fail table.
    Check(CheckArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file = match &cli.config {
        Some(path) => match config::FileConfig::load(path) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("{e}");
                return ExitCode::from(e.exit_code());
            }
        },
        None => config::FileConfig::default(),
    };
    let out = cli.output.as_deref();
    let result = match cli.command {
        Command::Kernel(args) => commands::kernel(args, file, out),
        Command::Transform(args) => commands::transform(args, file, out),
        Command::Evolve(args) => commands::evolve(args, file, out),
        Command::Propagate(args) => commands::propagate(args, file, out),
        Command::Trotter(args) => commands::trotter(args, file, out),
        Command::Heat(args) => commands::heat(args, file, out),
        Command::Mc(args) => commands::mc(args, file, out),
        Command::Check(args) => commands::check(args, file, out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
