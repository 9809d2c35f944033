//! `mdt`: expand generating series of quivers with potential and check them
//! against finite-field point counts.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mdt_core::{Branch, Engine, Family};

use crate::output::Format;

#[derive(Parser, Debug)]
#[command(name = "mdt", version, about = "Motivic DT series for quivers with potential")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a model file; print its quiver, potential, cut and relations.
    Parse(ParseArgs),
    /// Expand the closed-form generating series of a model's family.
    Series(SeriesArgs),
    /// Count points of the cut relation variety over F_p.
    OracleCount(CountArgs),
    /// Compare predicted classes with point-count ratios.
    Verify(VerifyArgs),
    /// Check that point-count series factor over invertible/nilpotent strata.
    FactorizationCheck(FactorArgs),
    /// Print the cyclic quiver model on n+1 vertices.
    GenCyclic(GenArgs),
}

#[derive(Args, Debug)]
struct ModelArg {
    /// Model file; shipped corpus names such as `conifold.qp` also work.
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args, Debug)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct Targets {
    /// Dimension vector, comma separated; repeat for several.
    #[arg(long = "alpha", value_parser = parse_alpha)]
    alphas: Vec<Vec<u32>>,
    /// Every dimension vector with 1 <= |alpha| <= N.
    #[arg(long, conflicts_with = "alphas")]
    degree: Option<u32>,
    /// Prime p; repeat or comma separate for several.
    #[arg(long = "prime", value_delimiter = ',', required = true)]
    primes: Vec<u64>,
}

#[derive(Args, Debug)]
struct Params {
    /// Parameter value in F_p, as name=value; repeatable.
    #[arg(long = "set", value_parser = parse_assignment)]
    set: Vec<(String, u64)>,
}

#[derive(Args, Debug)]
struct Counting {
    /// Largest search space to enumerate.
    #[arg(long, env = "MDT_CAP", default_value_t = mdt_core::oracle::DEFAULT_CAP)]
    cap: u128,
    /// Worker threads for enumeration.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    /// auto, exhaustive or fiber.
    #[arg(long, default_value = "auto")]
    engine: Engine,
}

#[derive(Args, Debug)]
struct ParseArgs {
    #[command(flatten)]
    model: ModelArg,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct SeriesArgs {
    #[command(flatten)]
    model: OptionalModel,
    /// Family name, instead of detecting it from --model.
    #[arg(long)]
    family: Option<Family>,
    /// generic, root:<r>, or auto (needs --prime and --set).
    #[arg(long, default_value = "generic")]
    branch: BranchChoice,
    #[arg(long = "truncate", default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    truncate: u32,
    #[arg(long)]
    prime: Option<u64>,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct OptionalModel {
    #[arg(long, required_unless_present = "family")]
    model: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[command(flatten)]
    model: ModelArg,
    #[command(flatten)]
    targets: Targets,
    #[command(flatten)]
    params: Params,
    #[command(flatten)]
    counting: Counting,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    model: ModelArg,
    #[arg(long)]
    family: Option<Family>,
    /// generic, root:<r>, or auto to choose from the parameter's order.
    #[arg(long, default_value = "auto")]
    branch: BranchChoice,
    #[command(flatten)]
    targets: Targets,
    #[command(flatten)]
    params: Params,
    /// Series truncation; defaults to |alpha|.
    #[arg(long = "truncate")]
    truncate: Option<u32>,
    #[command(flatten)]
    counting: Counting,
    /// Add elapsed_ms to each report.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct FactorArgs {
    #[command(flatten)]
    model: ModelArg,
    /// Arrows of the cut quiver forming one block endomorphism, comma
    /// separated; repeat for each factor. Defaults to each arrow of a
    /// one-vertex cut quiver with two arrows.
    #[arg(long = "split")]
    splits: Vec<String>,
    /// Largest |alpha| to count.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..))]
    degree: u32,
    #[arg(long = "prime", value_delimiter = ',', required = true)]
    primes: Vec<u64>,
    #[command(flatten)]
    params: Params,
    /// Run every nonzero value of the single parameter and compare strata
    /// with a nilpotent block across values.
    #[arg(long, conflicts_with = "set")]
    all_q: bool,
    #[command(flatten)]
    counting: Counting,
    #[command(flatten)]
    format: FormatArg,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    /// uniform: q on every term; single: q on one term.
    #[arg(long, default_value = "uniform")]
    layout: String,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum BranchChoice {
    Auto,
    Fixed(Branch),
}

impl std::str::FromStr for BranchChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            Ok(BranchChoice::Auto)
        } else {
            s.parse().map(BranchChoice::Fixed)
        }
    }
}

fn parse_alpha(s: &str) -> Result<Vec<u32>, String> {
    s.split(',')
        .map(|x| x.trim().parse::<u32>().map_err(|e| format!("bad entry '{x}': {e}")))
        .collect()
}

fn parse_assignment(s: &str) -> Result<(String, u64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let v = v.trim().parse::<u64>().map_err(|e| format!("bad value in '{s}': {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
