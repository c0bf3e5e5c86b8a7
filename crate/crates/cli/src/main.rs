mod args;
mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use finpolylog_core::padic::DEFAULT_DEPTH;
use finpolylog_core::solver::DEFAULT_MONOMIAL_BUDGET;
use finpolylog_core::Preset;
use serde::Serialize;

use crate::args::{LambdaChoice, PrimeList, Range};

/// Exit status when an expectation-tagged check fails.
const EXIT_FAILED: u8 = 1;
/// Exit status for configuration and usage errors.
const EXIT_CONFIG: u8 = 2;
/// Exit status when the report cannot be produced.
const EXIT_RUNTIME: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "finpolylog",
    version,
    about = "Verify identities of finite polylogarithms over F_p"
)]
struct Cli {
    /// File of `key = value` lines giving defaults for the subcommand's flags
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report here instead of standard output
    #[arg(long, short, global = true, value_name = "FILE")]
    output: Option<PathBuf>,

    /// No progress lines on standard error
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strong,
    Weak,
    Both,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check catalog equations strongly (as polynomials) or weakly (pointwise)
    Verify(VerifyArgs),
    /// Kernel of a preset's linear constraints on an unknown polynomial
    Solve(SolveArgs),
    /// Push a classical equation through a derivation and check the result
    Derive(DeriveArgs),
    /// Symbolic checks of the p-adic coefficient family
    Padic(PadicArgs),
    /// Entropy mod p of rational distributions
    Entropy(EntropyArgs),
    /// The 2-cocycle built from L_1 and its extension group
    Cocycle(CocycleArgs),
    /// Special values of L_n at 1 and -1
    Tables(TablesArgs),
    /// Catalog ids and solver presets
    List,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    /// Comma-separated ids, `all-finite` (the default suite) or `all`
    #[arg(long, default_value = "all-finite")]
    pub eq: String,
    #[arg(long, default_value = "5,7,11,13")]
    pub p: PrimeList,
    #[arg(long, value_enum, default_value_t = Mode::Strong)]
    pub mode: Mode,
    /// Weight for inversion and distribution
    #[arg(long)]
    pub weight: Option<i64>,
    /// Order of the distribution relation
    #[arg(long)]
    pub order: Option<i64>,
    /// Which J specialization (0..3)
    #[arg(long)]
    pub spec: Option<usize>,
    /// Largest distribution order in the `all-finite` suite (default p - 1)
    #[arg(long)]
    pub max_order: Option<u32>,
    /// Weak checks run over F_{p^ext}
    #[arg(long, default_value_t = 1)]
    pub ext: usize,
    #[arg(long, env = "FINPOLYLOG_POINT_BUDGET", default_value_t = 10_000_000)]
    pub point_budget: u64,
    /// Fail instead of sampling when the point space exceeds the budget
    #[arg(long)]
    pub no_sampling: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    /// FEIT, L1_TRIPLE, THREE_TERM, L2_PAIR, KS, J or THM423
    #[arg(long)]
    pub preset: Preset,
    #[arg(long, default_value = "5..31")]
    pub p: PrimeList,
    #[arg(long, env = "FINPOLYLOG_MONOMIAL_BUDGET", default_value_t = DEFAULT_MONOMIAL_BUDGET)]
    pub budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct DeriveArgs {
    /// A classical catalog id
    #[arg(long)]
    pub eq: String,
    /// `var:expr;var:expr`; default sum of t(1-t) d/dt over all variables
    #[arg(long)]
    pub derivation: Option<String>,
    /// Primes at which the derived relation is checked
    #[arg(long, default_value = "11")]
    pub verify: PrimeList,
    /// Compare the result with this infinitesimal id modulo inversion
    #[arg(long)]
    pub compare: Option<String>,
    /// Weight for inversion_classical and distribution_classical
    #[arg(long)]
    pub weight: Option<i64>,
    #[arg(long)]
    pub order: Option<i64>,
    #[arg(long, env = "FINPOLYLOG_POINT_BUDGET", default_value_t = 10_000_000)]
    pub point_budget: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct PadicArgs {
    /// Cleanness of the Besser coefficients for n in the range
    #[arg(long)]
    pub clean: Option<Range>,
    /// The recursion between consecutive levels for n in the range
    #[arg(long)]
    pub recursion: Option<Range>,
    /// Build a clean family up to this level
    #[arg(long)]
    pub family: Option<usize>,
    /// Fix lambda_n, as `n=value` (repeatable)
    #[arg(long)]
    pub lambda: Vec<LambdaChoice>,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct EntropyArgs {
    /// A distribution such as `1/4,1/4,1/2` (repeatable)
    #[arg(long)]
    pub dist: Vec<String>,
    /// A refined distribution for the chain rule, groups separated by `|`
    #[arg(long)]
    pub groups: Vec<String>,
    #[arg(long, default_value = "5,7,11")]
    pub p: PrimeList,
    /// Also test order independence on this many random distributions per p
    #[arg(long, default_value_t = 0)]
    pub random: usize,
    #[arg(long, default_value_t = 6)]
    pub max_outcomes: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "FINPOLYLOG_PERMUTATION_BUDGET", default_value_t = 40_320)]
    pub permutation_budget: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct CocycleArgs {
    #[arg(long, default_value = "3..31")]
    pub p: PrimeList,
    /// Enumerate all group triples when there are at most this many
    #[arg(long, default_value_t = 30_000_000)]
    pub exhaustive_limit: u64,
    /// Sampled triples otherwise
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct TablesArgs {
    #[arg(long, default_value = "3..101")]
    pub p: PrimeList,
}

fn config_echo<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let argv = match config::expand(argv, &Cli::command()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_CONFIG } else { 0 });
        }
    };
    let progress = commands::Progress { quiet: cli.quiet };
    let result = match &cli.command {
        Cmd::Verify(a) => commands::verify(a, &progress).map(|r| ("verify", config_echo(a), r)),
        Cmd::Solve(a) => commands::solve(a, &progress).map(|r| ("solve", config_echo(a), r)),
        Cmd::Derive(a) => commands::derive(a, &progress).map(|r| ("derive", config_echo(a), r)),
        Cmd::Padic(a) => commands::padic(a).map(|r| ("padic", config_echo(a), r)),
        Cmd::Entropy(a) => commands::entropy(a).map(|r| ("entropy", config_echo(a), r)),
        Cmd::Cocycle(a) => commands::cocycle(a, &progress).map(|r| ("cocycle", config_echo(a), r)),
        Cmd::Tables(a) => commands::tables(a).map(|r| ("tables", config_echo(a), r)),
        Cmd::List => Ok(("list", serde_json::json!({}), commands::list())),
    };
    let (name, config, records) = match result {
        Ok(x) => x,
        Err(commands::CmdError::Config(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_CONFIG);
        }
        Err(commands::CmdError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    };
    let report = report::Report::new(name, config, records);
    let text = match (cli.format, &cli.command) {
        (Format::Json, _) => Ok(report.to_json()),
        (Format::Csv, Cmd::Tables(a)) => commands::tables_csv(a),
        (Format::Csv, _) => report.to_csv(),
    };
    let written = text.and_then(|t| match &cli.output {
        Some(path) => std::fs::write(path, t).map_err(anyhow::Error::from),
        None => std::io::stdout().write_all(t.as_bytes()).map_err(anyhow::Error::from),
    });
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_RUNTIME);
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}
