//! Command-line runner: reads an experiment file, runs every scheme/grid
//! combination and writes CSV results.

// `!(a < b)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod output;
pub mod presets;
pub mod runner;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use config::{validate_config, Diagnostic, ExperimentConfig};
pub use error::CliError;
pub use runner::{run_experiment, ExperimentReport};

#[derive(Debug, Parser)]
#[command(
    name = "gpme",
    version,
    about = "Finite-volume experiments for the discontinuous porous medium equation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the experiment described by a config file.
    Run {
        config: PathBuf,
        /// Directory for the CSV output; overrides `output.dir`.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// List the named experiments, or print the config of one.
    Presets { name: Option<String> },
    /// Check a config file without running it.
    Validate { config: PathBuf },
}

/// Executes a parsed command line and returns the process exit code.
pub fn execute(cli: Cli) -> u8 {
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run { config, output_dir } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(dir) = output_dir {
                cfg.output_dir = dir;
            }
            let report = run_experiment(&cfg)?;
            for o in &report.outcomes {
                let err = o
                    .errors
                    .map(|e| format!(" l2={:.4e} linf={:.4e}", e.l2, e.linf))
                    .unwrap_or_default();
                println!("{}: {} steps{err}", o.key.stem(), o.record.steps);
            }
            println!(
                "wrote {} files to {}",
                report.files.len(),
                report.output_dir.display()
            );
            Ok(())
        }
        Command::Presets { name: None } => {
            for p in presets::ALL {
                println!("{:<18} {}", p.name, p.description);
            }
            Ok(())
        }
        Command::Presets { name: Some(name) } => match presets::find(&name) {
            Some(p) => {
                print!("{}", p.config);
                Ok(())
            }
            None => Err(CliError::Invalid(format!("  unknown preset '{name}'"))),
        },
        Command::Validate { config } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let diagnostics = validate_config(&cfg);
            if diagnostics.is_empty() {
                println!("ok");
                Ok(())
            } else {
                let lines: Vec<String> = diagnostics.iter().map(|d| format!("  {d}")).collect();
                Err(CliError::Invalid(lines.join("\n")))
            }
        }
    }
}
