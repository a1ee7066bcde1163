use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "latmat",
    version,
    about = "Exact meet and join (GCD/LCM) matrices on finite posets"
)]
pub struct Cli {
    /// Human-readable output instead of compact JSON.
    #[arg(long, global = true)]
    pub pretty: bool,

    /// Worker threads for enumeration and search; 1 runs sequentially.
    #[arg(long, global = true, env = "LATMAT_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Poset file checks and rendering.
    #[command(subcommand)]
    Poset(PosetCommand),
    /// Mobius function of a poset as a matrix of mu(i, j).
    Mobius {
        /// Poset JSON file, or `-` for stdin.
        file: PathBuf,
    },
    /// Meet or join matrix of a valued set.
    #[command(subcommand)]
    Matrix(MatrixCommand),
    /// Exact determinant of the join (or meet) matrix.
    Det {
        #[command(flatten)]
        set: SetArg,
        /// Elimination on the full matrix, or the prefix product over the Mobius function
        #[arg(long, value_enum, default_value_t = Route::Elimination)]
        via: Route,
        /// Join matrix [S]_f or meet matrix (S)_f
        #[arg(long, value_enum, default_value_t = Side::Join)]
        side: Side,
    },
    /// Split the join matrix as diag(f) (S)_{1/f} diag(f).
    Factorize {
        #[command(flatten)]
        set: SetArg,
    },
    /// Step-by-step invertibility conditions; exit 1 when singular.
    Invertibility {
        #[command(flatten)]
        set: SetArg,
        /// Accept f that is not semimultiplicative (meet-side verdict only).
        #[arg(long)]
        lenient: bool,
    },
    /// Meet semilattices up to isomorphism.
    Enumerate {
        /// Number of elements (at most 8)
        #[arg(long)]
        n: usize,
        /// Keep classes where some element covers at least this many.
        #[arg(long)]
        min_cover: Option<usize>,
        /// Print only the number of classes
        #[arg(long)]
        count_only: bool,
        /// Write one Hasse diagram per class into this directory.
        #[arg(long)]
        dot_dir: Option<PathBuf>,
    },
    /// Name the catalogued class isomorphic to a poset or divisor set.
    Classify {
        /// Poset JSON file.
        #[arg(conflicts_with = "elements", required_unless_present = "elements")]
        file: Option<PathBuf>,
        /// Comma-separated positive integers, ordered by divisibility.
        #[arg(long, value_delimiter = ',')]
        elements: Option<Vec<String>>,
    },
    /// Singular LCM matrices on gcd-closed sets.
    #[command(subcommand)]
    Counterexample(CounterexampleCommand),
    /// Evaluate a class inequality for f = N at concrete parameters.
    Inequality {
        /// g36, g37, g47a, g47b or gn2n.
        #[arg(long)]
        class: String,
        /// Comma-separated key=value list, e.g. a=2,b=3,c=2,d=5 or a1=2,a2=3.
        #[arg(long)]
        params: String,
        /// Top element; defaults to the lcm of the layer below it.
        #[arg(long)]
        top: Option<String>,
        /// Skip side-condition and shape checks; print only the expression.
        #[arg(long)]
        unchecked: bool,
    },
    /// Run every reproduction check and print a pass/fail table.
    ReproducePaper {
        /// Run only this criterion.
        #[arg(long)]
        only: Option<u8>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PosetCommand {
    /// Check that a file describes a partial order.
    Validate { file: PathBuf },
    /// Normalized JSON, or Graphviz with --dot.
    Show {
        file: PathBuf,
        #[arg(long)]
        dot: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum MatrixCommand {
    Meet {
        #[command(flatten)]
        set: SetArg,
    },
    Join {
        #[command(flatten)]
        set: SetArg,
    },
}

#[derive(Subcommand, Debug)]
pub enum CounterexampleCommand {
    /// Diagnose the LCM matrix of a set; exit 1 when singular.
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        elements: Vec<String>,
    },
    /// Search parametrized sets for singular LCM matrices; exit 1 when found.
    Search {
        /// Search shape; only s38 is available
        #[arg(long, default_value = "s38")]
        template: String,
        /// Upper bound for the middle-layer multipliers.
        #[arg(long)]
        bound: u64,
        /// Atoms are pairwise coprime triples from 2..=atom-bound.
        #[arg(long, default_value_t = 5)]
        atom_bound: u64,
        /// Stop after this many singular sets
        #[arg(long, default_value_t = 10)]
        limit: usize,
        /// Pad hits with a chain above the top to reach this size.
        #[arg(long, default_value_t = 8)]
        size: usize,
    },
}

#[derive(Args, Debug)]
pub struct SetArg {
    /// Valued-set JSON file, or `-` for stdin.
    #[arg(
        long = "set",
        conflicts_with = "elements",
        required_unless_present = "elements"
    )]
    pub file: Option<PathBuf>,
    /// Shorthand for a divisor-lattice set.
    #[arg(long, value_delimiter = ',')]
    pub elements: Option<Vec<String>>,
    /// Function name for --elements (N, 1/N, N^k, phi, sigma, sigma_k).
    #[arg(long, default_value = "N", requires = "elements")]
    pub f: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Route {
    Elimination,
    Convolution,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Join,
    Meet,
}
