//! `fbas`: command line analysis of federated Byzantine agreement systems.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "fbas",
    version,
    about = "Analyze federated Byzantine agreement systems"
)]
pub struct Cli {
    /// Emit one JSON object instead of human-readable text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(flatten)]
    pub guards: Guards,

    #[command(subcommand)]
    pub command: Command,
}

/// Resource limits. Exceeding one exits with status 3.
#[derive(Args, Debug, Clone)]
pub struct Guards {
    /// Most slices one threshold tree or simple node may expand to.
    #[arg(long, global = true, default_value_t = fbas_core::slices::DEFAULT_GENERATION_CAP)]
    pub expansion_cap: usize,

    /// Most quorums kept in memory when listing.
    #[arg(long, global = true, default_value_t = fbas_core::quorums::DEFAULT_QUORUM_CAP)]
    pub quorum_cap: usize,

    /// Largest FBAS whose subsets are searched exhaustively (DSet listing).
    #[arg(long, global = true, default_value_t = fbas_core::intact::DEFAULT_DSET_GUARD)]
    pub dset_guard: usize,

    /// Largest support of a failure distribution summed exactly, as a node
    /// count for independent failures.
    #[arg(long, global = true, default_value_t = fbas_core::probability::DEFAULT_EXACT_GUARD)]
    pub exact_guard: usize,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Enumerate quorums or minimal quorums.
    Quorums {
        file: PathBuf,
        /// Only inclusion-minimal quorums.
        #[arg(long)]
        minimal: bool,
        /// Stop after this many.
        #[arg(long)]
        limit: Option<usize>,
        /// Print only the number of quorums.
        #[arg(long)]
        count_only: bool,
        /// Cross-check against the brute-force oracle (at most 16 nodes).
        #[arg(long, conflicts_with = "limit")]
        oracle: bool,
    },
    /// Decide whether every two quorums intersect.
    CheckIntersection {
        file: PathBuf,
        /// Search the whole FBAS instead of its greatest strongly connected
        /// component.
        #[arg(long)]
        no_scc_preprocessing: bool,
        /// Print two disjoint quorums when there are any.
        #[arg(long)]
        witness: bool,
        /// Exit with status 1 unless the FBAS has quorum intersection.
        #[arg(long)]
        expect_intersection: bool,
        /// Also report the smallest intersection of two distinct quorums.
        #[arg(long)]
        min_intersection: bool,
        /// Cross-check against the brute-force oracle (at most 16 nodes).
        #[arg(long)]
        oracle: bool,
    },
    /// Strongly connected components of the trust graph.
    Sccs { file: PathBuf },
    /// Nodes that stay intact when the given nodes are ill-behaved.
    Intact {
        file: PathBuf,
        /// Comma-separated names of the ill-behaved nodes.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        ill_behaved: Vec<String>,
    },
    /// List every DSet (exhaustive; see --dset-guard).
    Dsets { file: PathBuf },
    /// Decide whether a set of nodes is a DSet.
    CheckDset {
        file: PathBuf,
        /// Comma-separated node names.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        set: Vec<String>,
    },
    /// Probability that nodes stay intact under random failures.
    IntactProbability(ProbabilityArgs),
    /// Write a generated FBAS document to standard output.
    #[command(subcommand)]
    Generate(Generate),
    /// Turn a 3-CNF formula (DIMACS) into a simple FBAS that has disjoint
    /// quorums exactly when the formula is satisfiable.
    #[command(name = "reduce-3sat")]
    Reduce3sat { file: PathBuf },
    /// Convert a JSON array of nodes with `publicKey` and `quorumSet` into
    /// a document.
    ConvertStellar { file: PathBuf },
    /// Quorum counts and timings on the organization family, as
    /// tab-separated text.
    Bench {
        #[arg(long, default_value_t = 2)]
        from: usize,
        #[arg(long, default_value_t = 6)]
        to: usize,
        /// Repeat each measurement for at least this long.
        #[arg(long, default_value_t = 20)]
        min_millis: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum Generate {
    /// Every node needs `threshold` of all `nodes` nodes.
    Symmetric {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        threshold: usize,
    },
    /// Organizations under a two-level threshold tree.
    Orgs {
        /// Comma-separated organization sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// Comma-separated per-organization thresholds.
        #[arg(long, value_delimiter = ',', required = true)]
        org_thresholds: Vec<usize>,
        /// How many organizations a slice must cover.
        #[arg(long)]
        root_threshold: usize,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    AtMostOne,
    Independent,
    GroupedByzantine,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    /// Grouped factorization for grouped models, exact summation otherwise.
    Auto,
    Exact,
    InclusionExclusion,
    Grouped,
}

#[derive(Args, Debug)]
pub struct ProbabilityArgs {
    pub file: PathBuf,

    /// Built-in failure model, configured by --p, --q and --r.
    #[arg(
        long,
        required_unless_present = "distribution",
        conflicts_with = "distribution"
    )]
    pub model: Option<Model>,

    /// A distribution document (JSON) instead of --model.
    #[arg(long)]
    pub distribution: Option<PathBuf>,

    /// Per-node failure probability (independent), or the probability of
    /// each single-node failure (at-most-one).
    #[arg(long)]
    pub p: Option<f64>,

    /// Per-node failure probability inside a well-behaved organization.
    #[arg(long)]
    pub q: Option<f64>,

    /// Probability that an organization turns fully Byzantine.
    #[arg(long)]
    pub r: Option<f64>,

    /// Report only this node.
    #[arg(long, conflicts_with = "all")]
    pub node: Option<String>,

    /// Report every node (the default).
    #[arg(long)]
    pub all: bool,

    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,

    /// Estimate by Monte Carlo with this many samples.
    #[arg(long)]
    pub mc_samples: Option<u64>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.status)
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.status)
        }
    }
}
