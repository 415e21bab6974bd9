use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::format::Format;

/// Maximal correlation of overlapping minima of independent variables.
///
/// Schemes are written `n,m,l`: U is the minimum of X_1..X_m and V the minimum
/// of X_{l+1}..X_n. Exit status is 0 on success, 1 when a verification or
/// property check fails, and 2 on invalid input.
#[derive(Debug, Parser)]
#[command(name = "maxcorr", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding [default: text for formula/verify, csv otherwise]
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Significant digits for printed reals
    #[arg(long, global = true, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..=17))]
    pub precision: u32,

    /// Write to this file instead of stdout
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form coefficient, printed with the i.i.d. upper bound
    Formula(FormulaArgs),
    /// Closed form against the SVD and ACE oracles on the exact joint table
    ///
    /// CSV columns: closed_form,svd,ace,max_diff,tolerance,truncated_mass,passed
    Verify(VerifyArgs),
    /// Parameter sweeps checking monotonicity and limit statements
    ///
    /// CSV columns: param,closed_form,oracle,abs_diff. For poisson_limit the
    /// oracle column is the Poisson value and for mo_limit the exponential
    /// value; hazard has no oracle column values.
    Sweep(SweepArgs),
    /// Seeded Monte Carlo estimate from empirical tables
    ///
    /// CSV columns: replicate,n_samples,estimate,closed_form,abs_error,
    /// followed by a `# mean ... se ...` summary line.
    Mc(McArgs),
    /// Dump the exact joint table of (U, V)
    Joint(JointArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaFamily {
    Continuous,
    Bernoulli,
    Geometric,
    Binomial,
    Poisson,
    #[value(name = "marshall-olkin", alias = "marshall_olkin")]
    MarshallOlkin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiscreteFamily {
    Bernoulli,
    Geometric,
    Binomial,
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    #[value(name = "rml_monotone", alias = "rml-monotone")]
    RmlMonotone,
    #[value(name = "poisson_limit", alias = "poisson-limit")]
    PoissonLimit,
    #[value(name = "mo_limit", alias = "mo-limit")]
    MoLimit,
    #[value(name = "hazard")]
    Hazard,
}

/// Distribution parameters shared by the subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct Params {
    /// Overlap scheme `n,m,l`
    #[arg(long)]
    pub scheme: Option<String>,

    /// Success probabilities: one value (broadcast to all n) or n values
    #[arg(long)]
    pub p: Option<String>,

    /// Poisson rate
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,

    /// Binomial trials
    #[arg(long)]
    pub d: Option<u64>,

    /// Exponential rates `l1,l2,l3` for marshall-olkin
    #[arg(long)]
    pub rates: Option<String>,
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    #[arg(value_enum)]
    pub family: FormulaFamily,
    #[command(flatten)]
    pub params: Params,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub family: DiscreteFamily,
    #[command(flatten)]
    pub params: Params,

    /// Tail mass allowed to be cut from infinite supports
    #[arg(long, default_value_t = 1e-12)]
    pub tail_eps: f64,

    /// ACE stopping tolerance
    #[arg(long, default_value_t = maxcorr::oracle::DEFAULT_TOL)]
    pub tol: f64,

    /// ACE iteration cap
    #[arg(long, default_value_t = maxcorr::oracle::DEFAULT_MAX_ITER)]
    pub max_iter: usize,

    /// Also print the optimal score functions from the SVD
    #[arg(long)]
    pub dump_functions: bool,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(value_enum)]
    pub kind: SweepKind,
    #[command(flatten)]
    pub params: Params,

    /// Grid size for rml_monotone (points i/(grid+1))
    #[arg(long, default_value_t = 1000)]
    pub grid: usize,

    /// Binomial trial counts for poisson_limit, e.g. `10,100,...,1e6`
    #[arg(long, default_value = "10,100,...,1e6")]
    pub k: String,

    /// Step sizes for mo_limit, e.g. `1e-1..1e-4`
    #[arg(long, default_value = "1e-1..1e-4")]
    pub h: String,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(value_enum)]
    pub family: DiscreteFamily,
    #[command(flatten)]
    pub params: Params,

    /// Samples per replicate
    #[arg(long, default_value_t = 100_000)]
    pub n: usize,

    /// Base seed (required; runs are reproducible)
    #[arg(long)]
    pub seed: u64,

    /// Independent replicates
    #[arg(long, default_value_t = 8)]
    pub replicates: usize,
}

#[derive(Debug, Args)]
pub struct JointArgs {
    #[arg(value_enum)]
    pub family: DiscreteFamily,
    #[command(flatten)]
    pub params: Params,

    /// Tail mass allowed to be cut from infinite supports
    #[arg(long, default_value_t = 1e-12)]
    pub tail_eps: f64,
}
