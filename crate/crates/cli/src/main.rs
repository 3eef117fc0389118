//! `dualshadow`: analyze operator sequences, operator tuples, and grid
//! function sequences from JSON files, or run the seeded verification suite.
//!
//! Exit codes: 0 success, 1 failing properties, 2 unreadable or malformed
//! input, 3 dimension mismatch, 4 tail premise fails.

mod commands;
mod config;
mod error;
mod fixtures;
mod io;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dualshadow::diagonal::SequenceInput;

use config::{CommonArgs, RunConfig};
use error::CliError;

#[derive(Parser)]
#[command(name = "dualshadow", version, about = "Dual-shadow norms, compactness certificates and joint numerical radii")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Norms, tail certificates and membership flags of an operator sequence.
    AnalyzeSequence(CommonArgs),
    /// Joint numerical radius, tuple norm, duality and range sample of an operator tuple.
    Numrange(CommonArgs),
    /// Modulus, image tails and the neighborhood bound for a grid function sequence.
    Cfun(CommonArgs),
    /// Seeded checks of every identity and inequality; `--input` adds a sequence file.
    Verify(CommonArgs),
    /// Writes a built-in instance file.
    Fixture {
        /// Fixture name; an unknown name lists the available ones.
        name: String,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::AnalyzeSequence(args) => commands::analyze_sequence(&RunConfig::new("analyze-sequence", &args)),
        Command::Numrange(args) => commands::numrange(&RunConfig::new("numrange", &args)),
        Command::Cfun(args) => commands::cfun(&RunConfig::new("cfun", &args)),
        Command::Verify(args) => run_verify(&RunConfig::new("verify", &args)),
        Command::Fixture { name, out } => {
            let value = fixtures::fixture(&name).ok_or_else(|| {
                CliError::Invalid(format!("unknown fixture `{name}`; available: {}", fixtures::names().join(", ")))
            })?;
            let path = io::OutDir::create(&out)?.json(&format!("{name}.json"), &value)?;
            println!("{}", path.display());
            Ok(())
        }
    }
}

fn run_verify(config: &RunConfig) -> Result<(), CliError> {
    let extra = match &config.input {
        Some(path) => Some(io::read_json::<SequenceInput>(path.as_ref())?.build(config.p)?),
        None => None,
    };
    let checks = verify::run(&config.search(), extra.as_ref());
    print!("{}", verify::table(&checks));
    let out = io::OutDir::create(&config.out)?;
    out.json("verify.json", &commands::Envelope::new(config, &[], &checks))?;
    let failing: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.property.to_string()).collect();
    if failing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failing))
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
