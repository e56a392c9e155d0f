use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use seccoh::cli::{exit_code, run, Command, Options, Oracle};
use seccoh::nonabelian::DEFAULT_SEARCH_BUDGET;
use seccoh::scenario::parse_scenario;

/// Semi-equivariant Čech cohomology, lifting obstructions and bundle
/// classification for finite Γ-spaces.
///
/// Exit codes: 0 success, 1 assertion failure, 2 input error, 3 budget
/// exceeded.
#[derive(Debug, Parser)]
#[command(name = "seccoh", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file (JSON, "schema": 1).
    #[arg(long)]
    scenario: PathBuf,
    /// Single cohomological degree to report.
    #[arg(long)]
    degree: Option<usize>,
    /// Extension to use (default: every extension in the scenario).
    #[arg(long)]
    extension: Option<String>,
    /// Cocycle to use (default: every matching cocycle in the scenario).
    #[arg(long)]
    cocycle: Option<String>,
    /// Lifting method for `lift`.
    #[arg(long, value_enum, default_value = "solve")]
    oracle: Oracle,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on exhaustive search sizes.
    #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET as u64)]
    budget: u64,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let fail = |e: seccoh::Error| {
        eprintln!("seccoh: {e}");
        ExitCode::from(exit_code(&e) as u8)
    };
    // every validation failure while reading the file is an input error
    let scenario = match parse_scenario(&args.scenario) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("seccoh: {e}");
            return ExitCode::from(2);
        }
    };
    let options = Options {
        degree: args.degree,
        extension: args.extension,
        cocycle: args.cocycle,
        oracle: args.oracle,
        seed: args.seed,
        budget: args.budget as u128,
    };
    let report = match run(args.command, &scenario, &options) {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let text = report.to_json();
    match &args.json {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("seccoh: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            println!(
                "{} on {}: {}",
                serde_json::to_value(report.command).expect("command serializes").as_str().unwrap_or("?"),
                report.scenario,
                if report.ok { "ok" } else { "FAILED" }
            );
        }
        None => print!("{text}"),
    }
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
