//! `tonal`: text to tones and back from the command line.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or format error (including
//! a failed selftest), 3 I/O error.

mod args;
mod commands;
mod config;
mod error;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

use crate::args::Cli;
use crate::config::ConfigFile;
use crate::error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    ExitCode::SUCCESS
                }
                _ => {
                    let message = e.render().to_string();
                    eprint!("{message}");
                    if !message.contains("Usage:") {
                        eprintln!("\n{}", usage_for_args());
                    }
                    ExitCode::from(1)
                }
            };
        }
    };

    let result = match &cli.config {
        Some(path) => ConfigFile::load(path),
        None => Ok(ConfigFile::default()),
    }
    .and_then(|cfg| commands::run(cli.command, &cfg));

    match result {
        Ok(()) => ExitCode::SUCCESS,
        // A closed stdout (e.g. piping into `head`) is not worth a diagnostic.
        Err(CliError::Stream(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tonal: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

/// Usage line of the deepest subcommand named on the command line.
fn usage_for_args() -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let mut current = &mut cmd;
    for arg in std::env::args().skip(1) {
        if current.find_subcommand(&arg).is_none() {
            continue;
        }
        current = current.find_subcommand_mut(&arg).expect("checked above");
    }
    current.render_usage().to_string()
}
