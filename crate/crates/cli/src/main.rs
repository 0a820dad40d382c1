use std::process::ExitCode;

use clap::Parser;
use spinwire_cli::Cli;

fn main() -> ExitCode {
    spinwire_cli::main_with(Cli::parse())
}
