//! Command-line front end: flag and config handling, command dispatch and
//! CSV/JSON output for the `spinwire` binary.

pub mod config;
pub mod error;
pub mod run;

use std::process::ExitCode;

pub use config::{Cli, Command, MethodChoice, RunConfig};
pub use error::CliError;
pub use run::{resolve, run, Outcome};

/// Runs a parsed command line. Errors go to stderr
/// as one JSON line.
pub fn main_with(cli: Cli) -> ExitCode {
    let cfg = match cli.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{}", e.record(None));
            return ExitCode::from(2);
        }
    };
    let result = resolve(&cfg).and_then(|resolved| {
        if let Some(path) = &cli.save_config {
            std::fs::write(path, resolved.to_json() + "\n").map_err(|e| CliError::io(path, e))?;
        }
        run(&resolved)
    });
    match result {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record(Some(&cfg)));
            match e {
                CliError::Config(_) | CliError::Missing { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
