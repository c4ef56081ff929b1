mod args;
mod error;
mod eval;
mod output;
mod verify;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(a) => eval::run_eval(a),
        Command::Table(a) => eval::run_table(a),
        Command::Verify(a) => verify::run_verify(a),
        Command::Limits(a) => eval::run_limits(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, error::CliError::VerifyFailed { .. }) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}
