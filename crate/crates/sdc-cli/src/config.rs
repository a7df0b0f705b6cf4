//! Command-line surface: subcommands, flags, and the state-spec grammar.

use std::fmt;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "sdc",
    about = "Simulate superdense coding of quantum states: exact and randomized preparation, entangled sharing, concentration experiments, and resource accounting",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Monte Carlo of the exact probabilistic preparation at dimension d
    Exact(ExactArgs),
    /// Monte Carlo of the shared-randomness randomized preparation
    Randomized(RandomizedArgs),
    /// Monte Carlo of entangled-state sharing (tripartite target)
    Share(ShareArgs),
    /// Flatness tail experiment over Haar isometries, one row per d_a
    Tail(TailArgs),
    /// Fraction of an ensemble whose members flatten a given state
    FlatFraction(FlatFractionArgs),
    /// Closed-form bound values at (d, epsilon)
    Bounds(BoundsArgs),
    /// Resource profiles (qubits, ebits, shared bits, rate) at (l, epsilon)
    Resources(ResourcesArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

/// Flags shared by every subcommand. The seed falls back to the
/// SDC_SEED environment variable; an explicit flag wins.
#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, env = "SDC_SEED", default_value_t = 0)]
    pub seed: u64,

    #[arg(long, value_enum, default_value_t = OutputFormat::Pretty)]
    pub output: OutputFormat,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    /// Entanglement dimension; the target is bipartite (d, d)
    #[arg(long)]
    pub d: usize,

    /// Target state: mes | product | haar | file:<path>
    #[arg(long, default_value = "haar")]
    pub state: StateSpec,

    #[arg(long, default_value_t = 2000)]
    pub trials: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct RandomizedArgs {
    /// Entanglement dimension; the target lives in d^2 dimensions
    #[arg(long)]
    pub d: usize,

    /// First output dimension of the randomizing isometries (>= d)
    #[arg(long)]
    pub d_a: usize,

    #[arg(long, default_value_t = 64)]
    pub ensemble_size: usize,

    #[arg(long, default_value = "haar")]
    pub state: StateSpec,

    #[arg(long, default_value_t = 2000)]
    pub trials: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ShareArgs {
    /// Entanglement dimension; the target is tripartite (d, d, d)
    #[arg(long)]
    pub d: usize,

    /// First output dimension of the randomizing isometries on A2 B
    #[arg(long)]
    pub d_a: usize,

    #[arg(long, default_value_t = 64)]
    pub ensemble_size: usize,

    #[arg(long, default_value = "haar")]
    pub state: StateSpec,

    #[arg(long, default_value_t = 2000)]
    pub trials: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct TailArgs {
    /// Second output dimension d_b; the fixed input state lives in d^2
    #[arg(long)]
    pub d: usize,

    /// Sweep of first output dimensions (repeat the flag or separate
    /// values with commas); one report row per value
    #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
    pub d_a: Vec<u64>,

    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,

    #[arg(long, default_value = "haar")]
    pub state: StateSpec,

    #[arg(long, default_value_t = 2000)]
    pub trials: u64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct FlatFractionArgs {
    /// Flatness dimension; the input state lives in d^2
    #[arg(long)]
    pub d: usize,

    /// First output dimension of the ensemble isometries
    #[arg(long)]
    pub d_a: usize,

    #[arg(long, default_value_t = 64)]
    pub ensemble_size: usize,

    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,

    /// Use a tripartite (d, d, d) target and randomize only its A2 B
    /// factor, reporting the convexity-surrogate check as well
    #[arg(long, default_value_t = false)]
    pub tripartite: bool,

    #[arg(long, default_value = "haar")]
    pub state: StateSpec,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Flatness dimension d (must satisfy d >= 10/epsilon)
    #[arg(long)]
    pub d: u64,

    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ResourcesArgs {
    /// Half the qubit count of the communicated state (d = 2^l)
    #[arg(long)]
    pub l: u64,

    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,

    #[command(flatten)]
    pub common: CommonArgs,
}

/// Which target state an experiment runs on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StateSpec {
    /// Maximally entangled |Phi_d> (for tripartite commands: maximal
    /// entanglement between the retained factor and B, ancilla in |0>)
    Mes,
    /// Random product state, one Haar factor per subsystem
    Product,
    /// Globally Haar-random state
    Haar,
    /// A JSON state file (partition + amplitude pairs)
    File(String),
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mes" => Ok(Self::Mes),
            "product" => Ok(Self::Product),
            "haar" => Ok(Self::Haar),
            other => match other.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(Self::File(path.to_string())),
                _ => Err(format!(
                    "unknown state spec '{other}': expected mes, product, haar, or file:<path>"
                )),
            },
        }
    }
}

impl fmt::Display for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Mes => write!(f, "mes"),
            Self::Product => write!(f, "product"),
            Self::Haar => write!(f, "haar"),
            Self::File(path) => write!(f, "file:{path}"),
        }
    }
}
