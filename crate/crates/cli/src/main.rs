mod commands;
mod config;
mod error;
mod output;
mod parse;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use crate::config::{Cli, Command, RunConfig};
use crate::error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("IDXF_MAX_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("IDXF_MAX_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let cfg = RunConfig::from_cli(cli)?;
    match cfg.command {
        Command::Verify => commands::run_verify(&cfg),
        Command::Transform => commands::run_transform(&cfg),
        Command::Eval => commands::run_eval(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
