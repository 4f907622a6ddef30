use std::path::PathBuf;
use std::process::ExitCode;

use clap::{error::ErrorKind, Parser, Subcommand};

use euler_congruence::data::{ingest_all, ingest_one};
use euler_congruence::report::{run_analyze, run_pair, selftest, PairOptions, Report};
use euler_congruence::{Error, Result};

#[derive(Parser)]
#[command(
    version,
    about = "Truncated Euler characteristics and congruence checks for elliptic curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Per-curve report for an embedded label or a JSONL file.
    Analyze {
        #[arg(long)]
        curve: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        false_tate_m: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Hypothesis ledger and congruence verdicts for a pair.
    Pair {
        #[arg(long)]
        curve1: String,
        #[arg(long)]
        curve2: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        false_tate_m: Option<u64>,
        #[arg(long)]
        gl2: bool,
        #[arg(long)]
        scan_bound: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Runs the embedded golden pairs.
    Selftest,
}

fn emit(report: &Report, json: Option<PathBuf>) -> Result<i32> {
    let text = report.to_json();
    if let Some(path) = json {
        std::fs::write(path, format!("{text}\n"))?;
    }
    println!("{text}");
    Ok(report.exit_code())
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze {
            curve,
            p,
            false_tate_m,
            json,
        } => {
            let curves = ingest_all(&curve)?;
            emit(&run_analyze(&curves, p, false_tate_m)?, json)
        }
        Command::Pair {
            curve1,
            curve2,
            p,
            false_tate_m,
            gl2,
            scan_bound,
            json,
        } => {
            let (c1, c2) = (ingest_one(&curve1)?, ingest_one(&curve2)?);
            let opts = PairOptions {
                false_tate_m,
                gl2,
                scan_bound,
            };
            emit(&run_pair(&c1, &c2, p, &opts)?, json)
        }
        Command::Selftest => {
            let cases = selftest()?;
            for c in &cases {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            Ok(if cases.iter().all(|c| c.passed) { 0 } else { 4 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 5,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = run(cli).unwrap_or_else(|e: Error| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
