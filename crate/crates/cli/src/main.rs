use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;

use commands::Mismatch;

#[derive(Parser, Debug)]
#[command(name = "slabclique", version, about = "Exact maximum cliques in disk and ball graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Slab,
    Oracle,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Parallel,
    Perp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Disks,
    UnitDisks,
    Balls,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Disks,
    UnitDisks,
    BallsParallel,
    BallsPerp,
}

#[derive(clap::Args, Debug)]
pub struct SolveArgs {
    /// Instance file (JSON).
    pub file: PathBuf,
    #[arg(long, value_enum, default_value = "slab")]
    pub algo: Algo,
    /// Also run the brute-force oracle and fail on disagreement.
    #[arg(long)]
    pub check: bool,
    /// Print the result as JSON.
    #[arg(long)]
    pub json: bool,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub threads: Option<usize>,
    /// Refuse instances whose guess count estimate exceeds this; 0 disables the guard.
    #[arg(long, default_value_t = slabclique::cobipartite::DEFAULT_GUESS_BUDGET)]
    pub budget: u128,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a seeded random instance.
    Gen {
        #[arg(long, value_enum, default_value = "disks")]
        kind: Kind,
        #[arg(long)]
        n: usize,
        /// Number of radius classes, taken from the front of --radii.
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Number of planes (balls only).
        #[arg(long, short = 'r', default_value_t = 1)]
        planes: usize,
        #[arg(long, value_enum, default_value = "parallel")]
        plane_kind: Mode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Side of the square coordinate box.
        #[arg(long, default_value = "10")]
        bbox: String,
        #[arg(long, value_delimiter = ',', default_value = "1,2,3.5")]
        radii: Vec<String>,
        /// Output file (default: stdout).
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Maximum clique of a disk instance.
    Clique(SolveArgs),
    /// Maximum clique of a ball instance.
    Ball {
        #[arg(long, value_enum)]
        mode: Mode,
        #[command(flatten)]
        solve: SolveArgs,
    },
    /// Precompute rectangle-query tables for a unit-disk instance.
    RangeBuild {
        file: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        /// Nudge coordinates into general position first.
        #[arg(long)]
        perturb: bool,
        #[arg(long, default_value_t = slabclique::range::DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Maximum clique among disks centered in an axis-parallel rectangle.
    RangeQuery {
        file: PathBuf,
        #[arg(long)]
        tables: PathBuf,
        #[arg(long, required = true, num_args = 4, value_names = ["X1", "Y1", "X2", "Y2"], allow_hyphen_values = true)]
        rect: Vec<String>,
        /// Must match the flag used at build time.
        #[arg(long)]
        perturb: bool,
        #[arg(long, default_value_t = slabclique::range::DEFAULT_MAX_N)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Timing and guess-count table as CSV.
    Bench {
        #[arg(long, value_enum, default_value = "disks")]
        suite: Suite,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        seeds: Vec<u64>,
        #[arg(long, value_delimiter = ',', default_value = "6,8,10")]
        sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "1")]
        k: Vec<usize>,
        /// Plane count for ball suites.
        #[arg(long, short = 'r', default_value_t = 2)]
        planes: usize,
        #[arg(long, value_enum, default_value = "both")]
        algo: Algo,
        #[arg(long, default_value = "10")]
        bbox: String,
        #[arg(long)]
        threads: Option<usize>,
    },
}

const EXIT_OTHER: u8 = 1;
const EXIT_PARSE: u8 = 3;
const EXIT_VALIDATION: u8 = 4;
const EXIT_BUDGET: u8 = 5;
const EXIT_MISMATCH: u8 = 6;

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Mismatch>().is_some() {
        return EXIT_MISMATCH;
    }
    use slabclique::Error as E;
    match err.downcast_ref::<E>() {
        Some(E::Parse(_)) => EXIT_PARSE,
        Some(
            E::Invalid(_)
            | E::Precondition(_)
            | E::TooLarge { .. }
            | E::DigestMismatch { .. }
            | E::InvalidGuess(_)
            | E::DuplicateVertex(_)
            | E::UnknownVertex(_),
        ) => EXIT_VALIDATION,
        Some(E::BudgetExceeded { .. }) => EXIT_BUDGET,
        _ => EXIT_OTHER,
    }
}

fn set_threads(threads: Option<usize>) -> anyhow::Result<()> {
    if let Some(t) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(t).build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Gen { kind, n, k, planes, plane_kind, seed, bbox, radii, out } => {
            commands::gen(kind, n, k, planes, plane_kind, seed, &bbox, &radii, out.as_deref())
        }
        Command::Clique(args) => {
            set_threads(args.threads)?;
            commands::clique(&args)
        }
        Command::Ball { mode, solve } => {
            set_threads(solve.threads)?;
            commands::ball(mode, &solve)
        }
        Command::RangeBuild { file, out, perturb, max_n, threads } => {
            set_threads(threads)?;
            commands::range_build(&file, &out, perturb, max_n)
        }
        Command::RangeQuery { file, tables, rect, perturb, max_n, json } => {
            commands::range_query(&file, &tables, &rect, perturb, max_n, json)
        }
        Command::Bench { suite, seeds, sizes, k, planes, algo, bbox, threads } => {
            set_threads(threads)?;
            commands::bench(suite, &seeds, &sizes, &k, planes, algo, &bbox)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
