//! `stein`: batch commands over the stein-core library.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error
//! (including a violated bound hypothesis), 3 numerical non-convergence.
//! Errors are reported on standard error as a JSON object.

mod args;
mod commands;
mod failure;
mod output;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use failure::Failure;

fn run(cli: Cli) -> Result<i32, Failure> {
    match cli.command {
        Command::Density(c) => commands::density(&c),
        Command::Solve(c) => commands::solve(&c),
        Command::Bound(c) => commands::bound(&c),
        Command::Verify { common, corrupt_tau } => commands::verify(&common, corrupt_tau),
        Command::Gof { common, sample } => commands::gof(&common, &sample),
        Command::Sample { common, n } => commands::sample(&common, n),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let f = Failure::usage(e.render().to_string().trim_end());
            eprintln!("{}", f.to_json());
            return ExitCode::from(f.code as u8);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.code as u8)
        }
    }
}
