//! `cdmx-markov`: command-line front end of the chain toolkit.
//!
//! Exit status is 0 on success, 1 when the model or data are invalid (or a
//! finding is reported under `--strict`), and 2 for I/O and usage errors.

mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::{Failure, Outcome};

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let common = &cli.common;
    match &cli.command {
        Command::Validate => commands::validate(common),
        Command::Horizons => commands::horizons(common),
        Command::Absorb => commands::absorb(common),
        Command::Estimate(a) => commands::estimate(common, a),
        Command::Fit(a) => commands::fit(common, a),
        Command::Simulate(a) => commands::simulate(common, a),
        Command::Plotdata(a) => commands::plotdata(common, a),
    }
}

fn write(cli: &Cli, bytes: &[u8]) -> Result<(), Failure> {
    match &cli.common.out {
        Some(path) => std::fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| Failure::Io(format!("stdout: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|outcome| {
        write(&cli, &outcome.output)?;
        if outcome.failed {
            return Err(Failure::Domain("validation failed".into()));
        }
        if cli.common.strict && outcome.findings > 0 {
            return Err(Failure::Domain(format!(
                "{} finding(s) reported under --strict",
                outcome.findings
            )));
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("cdmx-markov: {failure}");
            ExitCode::from(failure.exit_code())
        }
    }
}
