//! Command-line front end for `circledom-core`.
//!
//! Exit codes: 0 when the query was answered (whatever the verdict), 1 when
//! the input or the command line was rejected, 2 when an internal
//! consistency check or a certificate verification failed.

pub mod corpus;
mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use circledom_core::decision::Query;
use circledom_core::group::DEFAULT_ORACLE_BOUND;
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INCONSISTENT: i32 = 2;

/// Version of the `--json` report layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "circledom", version)]
#[command(about = "Decide domination of closed 3-manifolds by products and circle bundles")]
struct Cli {
    /// Emit the structured JSON report instead of text
    #[arg(long, global = true)]
    json: bool,

    /// Largest coset count the brute-force free-cover oracle will enumerate
    #[arg(long, global = true, value_name = "INT", default_value_t = DEFAULT_ORACLE_BOUND)]
    max_order: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum QueryArg {
    /// Dominated by a product F x S1
    Product,
    /// Dominated by a non-trivial circle bundle
    Ntbundle,
    /// Dominated by some circle bundle
    Anybundle,
    /// Fundamental group presentable by products
    Presentable,
}

impl From<QueryArg> for Query {
    fn from(q: QueryArg) -> Query {
        match q {
            QueryArg::Product => Query::Product,
            QueryArg::Ntbundle => Query::NontrivialBundle,
            QueryArg::Anybundle => Query::AnyBundle,
            QueryArg::Presentable => Query::Presentable,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WitnessArg {
    Product,
    Ntbundle,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Normalize a description and report invariants, geometry and all verdicts
    Classify { desc: String },
    /// Answer one query
    Decide { query: QueryArg, desc: String },
    /// Answer a domination query and print its certificate in full
    Witness { kind: WitnessArg, desc: String },
    /// Re-check a branched-cover schema stored as JSON
    Verify { schema_file: PathBuf },
    /// Run the three decision routes against each other
    Crosscheck {
        /// Single input; defaults to the corpus
        #[arg(conflicts_with = "sweep")]
        desc: Option<String>,
        /// Run the exhaustive small-input sweep
        #[arg(long)]
        sweep: bool,
        #[arg(long, value_name = "PATH", conflicts_with_all = ["desc", "sweep"])]
        corpus: Option<PathBuf>,
    },
    /// Evaluate every corpus entry and compare with its expected verdicts
    Corpus {
        #[arg(long, value_name = "PATH")]
        corpus: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_REJECTED
                }
            };
        }
    };
    let opts = report::Options {
        max_order: cli.max_order,
    };
    let result = match &cli.command {
        Command::Classify { desc } => report::classify(desc, &opts),
        Command::Decide { query, desc } => report::decide(Query::from(*query), desc, &opts),
        Command::Witness { kind, desc } => {
            let q = match kind {
                WitnessArg::Product => Query::Product,
                WitnessArg::Ntbundle => Query::NontrivialBundle,
            };
            report::witness(q, desc, &opts)
        }
        Command::Verify { schema_file } => report::verify(schema_file),
        Command::Crosscheck {
            desc,
            sweep,
            corpus,
        } => report::crosscheck(desc.as_deref(), *sweep, corpus.as_deref()),
        Command::Corpus { corpus } => report::corpus(corpus.as_deref()),
    };
    match result {
        Ok(outcome) => {
            let written = if cli.json {
                writeln!(out, "{}", pretty(&outcome.json))
            } else {
                write!(out, "{}", outcome.human)
            };
            if written.is_err() {
                return EXIT_INCONSISTENT;
            }
            outcome.code
        }
        Err(rejection) => {
            if cli.json {
                let _ = writeln!(out, "{}", pretty(&rejection.json()));
            }
            let _ = writeln!(err, "rejected: {}", rejection.message);
            EXIT_REJECTED
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("JSON values always serialize")
}
