//! `acopt` — build average-case optimal first-order methods from spectral
//! distributions, run them on random quadratics, and verify that their
//! parameters and rates converge to Polyak momentum.
//!
//! Exit codes: 0 success, 1 validation failure, 2 bad arguments,
//! 3 numeric failure.

mod commands;
mod csvout;
mod dist;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dist::DistArgs;

#[derive(Debug)]
pub enum CliError {
    BadArgs(String),
    Numeric(String),
    ValidationFailed(usize),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::BadArgs(m) => write!(f, "{m}"),
            CliError::Numeric(m) => write!(f, "{m}"),
            CliError::ValidationFailed(n) => write!(f, "{n} validation check(s) failed"),
        }
    }
}

impl From<acopt::Error> for CliError {
    fn from(e: acopt::Error) -> Self {
        match e {
            acopt::Error::Domain(m) => CliError::BadArgs(m),
            acopt::Error::Numeric(m) => CliError::Numeric(m),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::ValidationFailed(_) => 1,
            CliError::BadArgs(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "acopt",
    version,
    about = "Average-case optimal first-order methods from spectral distributions",
    after_help = "Quadrature nodes are raised automatically to 10x the iteration count \
                  wherever the orthogonal-polynomial construction needs it."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Quadrature node count for continuous densities.
    #[arg(long, global = true, default_value_t = 4000)]
    nodes: usize,

    /// Iteration count (each subcommand has its own default).
    #[arg(long, global = true)]
    iters: Option<usize>,

    /// Master seed for anything random.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Directory for emitted CSV/SVG files.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodKind {
    /// Average-case optimal schedule built from the distribution.
    Optimal,
    /// Polyak momentum on the spectrum edges.
    Polyak,
    /// Closed-form Marchenko-Pastur acceleration (requires --dist mp).
    MpClosed,
    /// Gradient descent with a constant step.
    Gd,
}

impl MethodKind {
    pub fn label(self) -> &'static str {
        match self {
            MethodKind::Optimal => "optimal",
            MethodKind::Polyak => "polyak",
            MethodKind::MpClosed => "mp-closed",
            MethodKind::Gd => "gd",
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit the optimal method's per-iteration coefficients as CSV.
    Coeffs(CoeffsArgs),
    /// Run one method on one sampled quadratic problem.
    Run(RunArgs),
    /// Theoretical expected-error series and fitted asymptotic rate.
    Rates(RatesArgs),
    /// Monte Carlo estimate of the expected error over sampled problems.
    Montecarlo(MonteArgs),
    /// Optimal momentum/step trajectories against the Polyak constants.
    Figure1(FigureArgs),
    /// Parameter gaps to Polyak momentum across conditioning sweeps.
    Figure2(Figure2Args),
    /// Run the built-in verification suite.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct CoeffsArgs {
    #[command(flatten)]
    dist: DistArgs,
}

#[derive(Debug, Args)]
struct RunArgs {
    #[command(flatten)]
    dist: DistArgs,

    /// Method to run.
    #[arg(long, value_enum, default_value = "optimal")]
    method: MethodKind,

    /// Problem dimension.
    #[arg(long, default_value_t = 200)]
    d: usize,

    /// Sample count for Wishart problems (H = A'A/n with A of shape n x d).
    #[arg(long, default_value_t = 400)]
    n: usize,

    /// Distance of the start point from the solution.
    #[arg(long, default_value_t = 1.0)]
    radius: f64,

    /// Step size for --method gd (default 2/(L+l) from the distribution edges).
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Debug, Args)]
struct RatesArgs {
    #[command(flatten)]
    dist: DistArgs,

    #[arg(long, value_enum, default_value = "optimal")]
    method: MethodKind,

    /// Fraction of the series tail used in the rate fit.
    #[arg(long, default_value_t = 0.5)]
    tail_fraction: f64,

    /// Step size for --method gd.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Debug, Args)]
struct MonteArgs {
    #[command(flatten)]
    dist: DistArgs,

    #[arg(long, value_enum, default_value = "optimal")]
    method: MethodKind,

    #[arg(long, default_value_t = 200)]
    d: usize,

    #[arg(long, default_value_t = 400)]
    n: usize,

    #[arg(long, default_value_t = 1.0)]
    radius: f64,

    #[arg(long, default_value_t = 20)]
    trials: usize,

    /// Step size for --method gd.
    #[arg(long)]
    step: Option<f64>,
}

#[derive(Debug, Args)]
struct FigureArgs {
    /// Restrict to one distribution instead of the default pair
    /// (MP(1, 0.5) and uniform(1, 2)).
    #[command(flatten)]
    dist: DistArgs,
}

#[derive(Debug, Args)]
struct Figure2Args {
    /// Marchenko-Pastur aspect ratios to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.2, 0.5, 0.8])]
    ratios: Vec<f64>,

    /// Entry standard deviation for the MP sweep.
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,

    /// Condition numbers for the uniform [1, kappa] sweep.
    #[arg(long, value_delimiter = ',', default_values_t = vec![4.0, 100.0, 10000.0])]
    kappas: Vec<f64>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    /// Run the reduced (t <= 50) subset only.
    #[arg(long)]
    fast: bool,

    /// Diagnostic hook: shift every recurrence alpha by this amount before
    /// the schedule consistency check (nonzero values must fail it).
    #[arg(long, default_value_t = 0.0)]
    perturb_alpha: f64,
}

/// Iteration defaults per subcommand.
fn default_iters(cmd: &Command) -> usize {
    match cmd {
        Command::Coeffs(_) => 300,
        Command::Run(_) => 100,
        Command::Rates(_) => 400,
        Command::Montecarlo(_) => 50,
        Command::Figure1(_) => 300,
        Command::Figure2(_) => 1000,
        Command::Validate(_) => 0,
    }
}

/// Stieltjes needs at least 10 nodes per degree.
pub fn effective_nodes(requested: usize, iters: usize) -> usize {
    requested.max(10 * iters)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let iters = cli.iters.unwrap_or_else(|| default_iters(&cli.command));
    let ctx = commands::Context {
        nodes: cli.nodes,
        iters,
        seed: cli.seed,
        out: cli.out,
        quiet: false,
    };
    let result = match cli.command {
        Command::Coeffs(args) => commands::coeffs(&ctx, &args.dist),
        Command::Run(args) => commands::run(&ctx, &args),
        Command::Rates(args) => commands::rates(&ctx, &args),
        Command::Montecarlo(args) => commands::montecarlo(&ctx, &args),
        Command::Figure1(args) => commands::figure1(&ctx, &args),
        Command::Figure2(args) => commands::figure2(&ctx, &args),
        Command::Validate(args) => commands::validate(&ctx, &args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
