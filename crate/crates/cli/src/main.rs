use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use hypotest_cli::args::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match hypotest_cli::run(&cli) {
        Ok(text) => {
            let mut out = std::io::stdout().lock();
            // A closed pipe is not an error worth reporting.
            let _ = out.write_all(text.as_bytes()).and_then(|()| out.flush());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
