//! Command-line front end for the `localcut` clustering library.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "localcut", version, about = "Local graph clustering with flow and spectral methods")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Fiedler vector of the whole graph
    Spectral,
    /// Round a vector read with --vector into a set
    Sweep,
    /// Best subset of the seed set under cut/volume
    Mqi,
    /// Global minimizer of the seed-biased conductance
    FlowImprove,
    /// Strongly local Flow-Improve, tuned by --delta or --kappa
    LocalFlowImprove,
    /// Dirichlet eigenvector of the seed set
    SpectralMqi,
    /// Locally-biased spectral vector at --rho, or at correlation --corr
    Mov,
    /// l1-regularized PageRank
    L1pr,
    /// Exhaustive minimum for small graphs
    Brute,
    /// Recompute cut statistics of the set given by --set
    Eval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ObjectiveArg {
    #[default]
    Conductance,
    Expansion,
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// Edge list, one `u v [w]` per line
    #[arg(long, global = true, value_name = "PATH")]
    pub graph: Option<std::path::PathBuf>,
    /// File with one seed label per line
    #[arg(long, global = true, value_name = "PATH")]
    pub seed_set: Option<std::path::PathBuf>,
    /// Single seed label
    #[arg(long, global = true, value_name = "LABEL")]
    pub seed_node: Option<String>,
    /// Set to evaluate (eval)
    #[arg(long, global = true, value_name = "PATH")]
    pub set: Option<std::path::PathBuf>,
    /// Vector CSV to round (sweep)
    #[arg(long, global = true, value_name = "PATH")]
    pub vector: Option<std::path::PathBuf>,
    /// Teleportation parameter of l1pr, in (0, 1)
    #[arg(long, global = true, default_value_t = 0.15)]
    pub alpha: f64,
    /// Sparsity penalty of l1pr, > 0
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub epsilon: f64,
    /// MOV shift, > -lambda2
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub rho: Option<f64>,
    /// MOV target correlation, in (0, 1]
    #[arg(long, global = true)]
    pub corr: Option<f64>,
    /// Local-Flow-Improve penalty increment, >= 0
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Local-Flow-Improve penalty multiplier, >= 1
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Solver tolerance, > 0
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Iteration cap of the flow methods
    #[arg(long, global = true, default_value_t = localcut::flow::DEFAULT_MAX_ITERS)]
    pub max_iters: usize,
    #[arg(long, global = true, value_enum, default_value_t = ObjectiveArg::Conductance)]
    pub objective: ObjectiveArg,
    /// Use the combinatorial instead of the normalized Laplacian (spectral)
    #[arg(long, global = true)]
    pub unnormalized: bool,
    /// Round the computed vector with a sweep cut
    #[arg(long, global = true)]
    pub sweep: bool,
    /// Write the JSON result here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<std::path::PathBuf>,
    /// Write the computed vector as CSV
    #[arg(long, global = true, value_name = "PATH")]
    pub vector_out: Option<std::path::PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
