//! Command-line front end: scenario files, report formatting and the
//! subcommands of the `hypotest` binary.

pub mod args;
pub mod commands;
pub mod format;
pub mod scenario;

use anyhow::Result;

use args::{Cli, Command};
use commands::Report;

/// Runs one subcommand, writes its CSV if requested, and returns the text
/// for stdout.
pub fn run(cli: &Cli) -> Result<String> {
    let (report, csv_path): (Report, _) = match &cli.command {
        Command::Design(a) => (commands::design(a)?, a.output.csv.as_ref()),
        Command::Np(a) => (commands::np(a)?, a.output.csv.as_ref()),
        Command::Compare(a) => (commands::compare(a)?, a.output.csv.as_ref()),
        Command::Simulate(a) => (commands::simulate(a)?, a.output.csv.as_ref()),
        Command::VerifyRelaxation(a) => (commands::verify_relaxation(a)?, a.output.csv.as_ref()),
        Command::ReproduceTable(a) => (commands::reproduce_table(a)?, a.output.csv.as_ref()),
    };
    let mut text = report.text;
    if let Some(path) = csv_path {
        report.csv.write(path)?;
        text.push_str(&format!("csv: {}\n", path.display()));
    }
    Ok(text)
}
