//! The `qdesign` command line: parameter filters, orbit censuses, design
//! verification and the named reproduction pipelines.
//!
//! Exit codes: 0 success or the claim holds, 2 refuted or not a design,
//! 3 budget exceeded, 1 usage or I/O error.

pub mod files;
pub mod groups;
mod pipelines;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use qdesign_core::designs::DesignError;
use qdesign_core::matgroup::MatGroupError;

pub use report::PipelineReport;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qdesign", version, about = "Exact computations for block-transitive subspace designs")]
pub struct Cli {
    /// Seed for sampled censuses.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for censuses and orbit verdicts.
    #[arg(long, global = true, default_value_t = 1)]
    pub parallelism: usize,
    /// Wall-clock budget; exceeding it exits with code 3.
    #[arg(long, global = true)]
    pub budget_seconds: Option<f64>,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Arithmetic necessary conditions for a t-(d,k,λ)_q design.
    Params(ParamsArgs),
    /// Orbits of a group on k-subspaces, by lex-least representative.
    Census(CensusArgs),
    /// Check a block file, or every orbit of a census file, for the design property.
    Verify(VerifyArgs),
    /// Run a named reproduction pipeline.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct ParamsArgs {
    #[arg(short = 't')]
    pub t: u32,
    #[arg(short = 'd')]
    pub d: u32,
    #[arg(short = 'k')]
    pub k: u32,
    #[arg(short = 'l', long = "lambda")]
    pub lambda: BigUint,
    #[arg(short = 'q')]
    pub q: u64,
    /// Order of a prescribed block-transitive group.
    #[arg(long)]
    pub group_order: Option<BigUint>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum StrategyArg {
    Sampled,
    FullScan,
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    /// gamma-l1, hyperplane-levi:K|H, sl, trivial or generators:<path>.
    #[arg(long)]
    pub group: String,
    #[arg(long = "p")]
    pub p: Option<u64>,
    #[arg(long = "d")]
    pub d: Option<u32>,
    #[arg(long = "k")]
    pub k: u32,
    /// Primitive polynomial for gamma-l1, e.g. x^11+x^2+1.
    #[arg(long)]
    pub poly: Option<String>,
    #[arg(long, value_enum, default_value = "sampled")]
    pub strategy: StrategyArg,
    /// Census file to resume from and rewrite periodically.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 10_000)]
    pub checkpoint_every: u64,
    /// Where to write the final census file.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Lift the full-scan size guard.
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub max_samples: Option<u64>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Census file: every orbit is tested as a single-orbit design.
    #[arg(long, conflicts_with = "blocks", required_unless_present = "blocks")]
    pub census: Option<PathBuf>,
    /// Block file: the whole set is tested.
    #[arg(long)]
    pub blocks: Option<PathBuf>,
    #[arg(short = 't', default_value_t = 2)]
    pub t: u32,
    #[arg(short = 'l', long = "lambda")]
    pub lambda: Option<BigUint>,
    /// Also verify the dual block set (block files only).
    #[arg(long)]
    pub dual: bool,
    /// Write one verdict line per orbit here (census files only).
    #[arg(long)]
    pub verdicts: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Pipeline {
    /// Orbits of the hyperplane stabiliser's Levi factor on 3-spaces of F_2^6.
    #[value(name = "lemma-2-2", alias = "lemma-3-2")]
    HyperplaneLevi,
    /// 93 divides the block count of every 2-(6,3,λ)_2 design.
    #[value(name = "lemma-3-1")]
    BlockCount93,
    /// 2-(7,3,λ)_2 block counts against the Singer normaliser.
    #[value(name = "lemma-3-4")]
    Singer7,
    /// Exhaustive orbit search for a ΓL1(2^11)-invariant 2-(11,5,5)_2 design.
    #[value(name = "lemma-3-5")]
    Singer11Search,
    /// Exponents with trivial primitive part.
    #[value(name = "zsigmondy-scan")]
    ZsigmondyScan,
    /// Integrality scan for Singer-normaliser designs.
    #[value(name = "singer-scan")]
    SingerScan,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    pub id: Pipeline,
    /// zsigmondy-scan: largest exponent.
    #[arg(long, default_value_t = 20)]
    pub max_e: u32,
    /// zsigmondy-scan: field size.
    #[arg(short = 'q', default_value_t = 2)]
    pub q: u64,
    /// singer-scan: fields as p^d, e.g. 2^11 (repeatable).
    #[arg(long = "field")]
    pub fields: Vec<String>,
    /// lemma-3-5: census checkpoint, resumed when present.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// lemma-3-5: write the complete census here.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Flags shared by every command.
pub(crate) struct Context {
    pub seed: u64,
    pub parallelism: usize,
    pub budget_seconds: Option<f64>,
    pub deadline: Option<Instant>,
    pub json: bool,
}

/// How a command ended, short of an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Outcome {
    Holds,
    Refuted,
    Budget,
}

impl Outcome {
    fn code(self) -> i32 {
        match self {
            Outcome::Holds => EXIT_OK,
            Outcome::Refuted => EXIT_REFUTED,
            Outcome::Budget => EXIT_BUDGET,
        }
    }
}

fn is_budget(err: &anyhow::Error) -> bool {
    err.chain().any(|e| {
        matches!(
            e.downcast_ref::<MatGroupError>(),
            Some(MatGroupError::BudgetExceeded(_) | MatGroupError::OrbitBudgetExceeded(_))
        ) || matches!(e.downcast_ref::<DesignError>(), Some(DesignError::BudgetExceeded(_)))
    })
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    if cli.parallelism == 0 {
        eprintln!("error: --parallelism must be at least 1");
        return EXIT_USAGE;
    }
    let deadline = match cli.budget_seconds {
        Some(s) if !(s.is_finite() && s >= 0.0) => {
            eprintln!("error: --budget-seconds must be a non-negative number");
            return EXIT_USAGE;
        }
        Some(s) => Some(Instant::now() + Duration::from_secs_f64(s)),
        None => None,
    };
    let ctx = Context {
        seed: cli.seed,
        parallelism: cli.parallelism,
        budget_seconds: cli.budget_seconds,
        deadline,
        json: cli.json,
    };
    let result = match &cli.command {
        Command::Params(a) => pipelines::params(&ctx, a),
        Command::Census(a) => pipelines::census(&ctx, a),
        Command::Verify(a) => pipelines::verify(&ctx, a),
        Command::Reproduce(a) => pipelines::reproduce(&ctx, a),
    };
    match result {
        Ok(outcome) => outcome.code(),
        Err(e) if is_budget(&e) => {
            eprintln!("budget exceeded: {e:#}");
            EXIT_BUDGET
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_USAGE
        }
    }
}
