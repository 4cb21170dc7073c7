use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sgep", about = "Sparse generalized eigenvalue solvers", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve one instance and print a JSON report.
    Solve(SolveArgs),
    /// Run a benchmark suite and print tidy CSV.
    Bench(BenchArgs),
    /// Exact enumeration oracle on one instance.
    Oracle(OracleArgs),
    /// Generate synthetic datasets from a spec JSON.
    Gen(GenArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Solver {
    Tpm,
    Rifle,
    PgsaMl,
    SaTpm,
    SaRifle,
    SaPgsaMl,
    Oracle,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::Tpm => "tpm",
            Solver::Rifle => "rifle",
            Solver::PgsaMl => "pgsa-ml",
            Solver::SaTpm => "sa-tpm",
            Solver::SaRifle => "sa-rifle",
            Solver::SaPgsaMl => "sa-pgsa-ml",
            Solver::Oracle => "oracle",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum SaVariantArg {
    Partial,
    Greedy,
}

#[derive(Parser, Debug)]
pub struct SolveArgs {
    /// CSV file with the A matrix.
    #[arg(long)]
    pub matrix_a: PathBuf,
    /// CSV file with the B matrix; identity when omitted.
    #[arg(long)]
    pub matrix_b: Option<PathBuf>,
    /// Sparsity budget s.
    #[arg(long)]
    pub sparsity: usize,
    #[arg(long, value_enum)]
    pub solver: Solver,
    /// Initial point: "default", "seeded-random", or "csv:<path>".
    #[arg(long, default_value = "default")]
    pub init: String,
    #[arg(long, env = "SGEP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Entries of externally loaded vectors with |v| <= this are treated as
    /// exact zeros.
    #[arg(long, default_value_t = 0.0)]
    pub zero_tol: f64,
    /// Enumeration budget for the oracle solver.
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
    #[arg(long, default_value_t = 5000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Line-search strength a of the backtracking acceptance test.
    #[arg(long, default_value_t = 0.0)]
    pub line_search_a: f64,
    /// Backtracking factor.
    #[arg(long, default_value_t = 0.5)]
    pub eta: f64,
    /// Fixed step for the rifle solver.
    #[arg(long, default_value_t = 0.25)]
    pub rifle_alpha: f64,
    /// Alteration flavor used by the sa-* solvers.
    #[arg(long, value_enum, default_value_t = SaVariantArg::Partial)]
    pub sa_variant: SaVariantArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Pitprops,
    Gaussian,
    Spike,
    Fda,
    Cca,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Pitprops => "pitprops",
            Suite::Gaussian => "gaussian",
            Suite::Spike => "spike",
            Suite::Fda => "fda",
            Suite::Cca => "cca",
        }
    }
}

#[derive(Parser, Debug)]
pub struct BenchArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    /// Trials per grid point for the randomized suites.
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, env = "SGEP_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Noise levels for the spike suite.
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.0, 1.0, 2.0, 4.0, 8.0])]
    pub sigmas: Vec<f64>,
    /// Worker threads for independent trials.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

#[derive(Parser, Debug)]
pub struct OracleArgs {
    #[arg(long)]
    pub matrix_a: PathBuf,
    #[arg(long)]
    pub matrix_b: Option<PathBuf>,
    #[arg(long)]
    pub sparsity: usize,
    #[arg(long, default_value_t = 10_000_000)]
    pub budget: u64,
}

#[derive(Parser, Debug)]
pub struct GenArgs {
    /// JSON file describing what to generate.
    #[arg(long)]
    pub spec: PathBuf,
    /// Output directory; created if missing.
    #[arg(long)]
    pub out_dir: PathBuf,
}
