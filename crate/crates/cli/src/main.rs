//! `overmes`: count overpartitions, tabulate the minimal excludant size
//! statistics, and verify their generating functions against enumeration.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on usage errors.

mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use overmes_core::{Fault, StatParams, TheoremId};

#[derive(Debug, Parser)]
#[command(name = "overmes", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Overpartition counts from the product formula and from enumeration.
    Count(CountArgs),
    /// Coefficients of one identity, enumeration side next to formula side.
    Table(TableArgs),
    /// The three statistics of every overpartition of n.
    Stats(StatsArgs),
    /// Check one identity coefficient by coefficient.
    Verify(VerifyArgs),
    /// Check every identity over a parameter grid.
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long = "r")]
    r: u32,
    /// Modulus A.
    #[arg(long = "A")]
    modulus: u32,
    /// Residue a, with 1 <= a <= A.
    #[arg(long = "a")]
    residue: u32,
}

impl ParamArgs {
    fn params(&self) -> Result<StatParams, commands::CliError> {
        Ok(StatParams::new(self.r, self.modulus, self.residue)?)
    }
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long, allow_negative_numbers = true)]
    n_max: i64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long, allow_negative_numbers = true)]
    n: i64,
    #[command(flatten)]
    params: ParamArgs,
    /// Render overlined parts with a combining macron instead of `~`.
    #[arg(long)]
    unicode: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct TableArgs {
    #[arg(long)]
    theorem: String,
    #[command(flatten)]
    params: ParamArgs,
    /// Truncation order.
    #[arg(long = "N", default_value_t = 30)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    theorem: String,
    #[command(flatten)]
    params: ParamArgs,
    /// Truncation order.
    #[arg(long = "N", default_value_t = 30)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Report elapsed_ms as 0 so output is byte-for-byte reproducible.
    #[arg(long)]
    no_timing: bool,
    /// Harness self-test: add 1 to one formula coefficient, `THEOREM:K:N`
    /// with `K` = `_` for univariate identities.
    #[arg(long, hide = true, value_parser = parse_fault)]
    inject_fault: Option<Fault>,
}

#[derive(Debug, Args)]
struct VerifyAllArgs {
    /// Truncation order.
    #[arg(long = "N", default_value_t = 30)]
    order: usize,
    #[arg(long, default_value_t = 3)]
    r_max: u32,
    #[arg(long = "A-max", default_value_t = 3)]
    modulus_max: u32,
    /// Largest weight for the pointwise property checks; defaults to min(N, 12).
    #[arg(long)]
    structural_n_max: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    no_timing: bool,
    #[arg(long, hide = true, value_parser = parse_fault)]
    inject_fault: Option<Fault>,
}

fn parse_fault(s: &str) -> Result<Fault, String> {
    let mut it = s.split(':');
    let (Some(theorem), Some(k), Some(n), None) = (it.next(), it.next(), it.next(), it.next())
    else {
        return Err("expected THEOREM:K:N".into());
    };
    let theorem: TheoremId = theorem.parse().map_err(|e: overmes_core::Error| e.to_string())?;
    let k = match k {
        "_" | "-" => None,
        k => Some(k.parse().map_err(|_| format!("bad k `{k}`"))?),
    };
    let n = n.parse().map_err(|_| format!("bad n `{n}`"))?;
    Ok(Fault { theorem, k, n })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Count(args) => commands::count(args),
        Command::Table(args) => commands::table(args),
        Command::Stats(args) => commands::stats(args),
        Command::Verify(args) => commands::verify(args),
        Command::VerifyAll(args) => commands::verify_all(args),
    };
    match outcome {
        Ok(out) => {
            print!("{}", out.stdout);
            if out.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
