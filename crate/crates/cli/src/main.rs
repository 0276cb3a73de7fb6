use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(gpme_cli::execute(gpme_cli::Cli::parse()))
}
