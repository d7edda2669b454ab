//! `flagdeg`: projective degrees, fixed-point identities and additive
//! combinatorics checks from the command line.

mod additive;
mod degree;
mod hopper;
mod identity;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flagdeg::sumsets::DEFAULT_BUDGET;
use flagdeg::Error;
use serde::Serialize;

use crate::output::{Format, Report};

#[derive(Parser, Debug)]
#[command(name = "flagdeg", version, about = "Projective degrees of flag varieties and the sumset bounds they imply")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Cap on enumerated instances; larger runs stop early and exit 3.
    #[arg(long, global = true, env = "FLAGDEG_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Command {
    /// Closed-form degrees.
    #[command(subcommand)]
    Degree(degree::DegreeCmd),
    /// Random exact checks of fixed-point sums against their degrees.
    #[command(subcommand)]
    Identity(identity::IdentityCmd),
    /// One sumset with the matching theorem verdicts.
    #[command(subcommand)]
    Sumset(additive::SumsetCmd),
    /// Exhaustive theorem scans over small primes.
    #[command(subcommand)]
    Scan(additive::ScanCmd),
    /// Grasshopper budgets, instances and searches.
    #[command(subcommand)]
    Grasshopper(hopper::GrasshopperCmd),
}

pub struct Context {
    pub seed: u64,
    pub budget: u64,
}

pub fn require(cond: bool, msg: String) -> flagdeg::Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Contract(msg))
    }
}

/// Rewrites `--forbidI LIST` and `--forbidI=LIST` into `--forbid I:LIST`.
fn expand_forbid(args: impl IntoIterator<Item = OsString>) -> Vec<OsString> {
    let mut out = Vec::new();
    let mut iter = args.into_iter().peekable();
    while let Some(arg) = iter.next() {
        let Some(s) = arg.to_str() else {
            out.push(arg);
            continue;
        };
        let Some(rest) = s.strip_prefix("--forbid") else {
            out.push(arg);
            continue;
        };
        let (index, inline) = match rest.split_once('=') {
            Some((i, v)) => (i, Some(v.to_string())),
            None => (rest, None),
        };
        if index.is_empty() || !index.bytes().all(|b| b.is_ascii_digit()) {
            out.push(arg);
            continue;
        }
        let value = inline.or_else(|| iter.next().map(|v| v.to_string_lossy().into_owned())).unwrap_or_default();
        out.push("--forbid".into());
        out.push(format!("{index}:{value}").into());
    }
    out
}

fn run(cli: &Cli) -> flagdeg::Result<Report> {
    let ctx = Context { seed: cli.global.seed, budget: cli.global.budget };
    let mut report = Report::new();
    match &cli.command {
        Command::Degree(cmd) => degree::run(cmd, &ctx, &mut report)?,
        Command::Identity(cmd) => identity::run(cmd, &ctx, &mut report)?,
        Command::Sumset(cmd) => additive::run_sumset(cmd, &mut report)?,
        Command::Scan(cmd) => additive::run_scan(cmd, &ctx, &mut report)?,
        Command::Grasshopper(cmd) => hopper::run(cmd, &ctx, &mut report)?,
    }
    Ok(report)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse_from(expand_forbid(std::env::args_os())) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(match e {
                Error::Internal(_) => 1,
                _ => 2,
            });
        }
    };
    let header = output::header(&cli.command, cli.global.seed, cli.global.budget);
    let text = report.render(cli.global.format, &header);
    let written = match &cli.global.output {
        Some(path) => std::fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code())
}
