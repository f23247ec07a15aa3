//! Command-line front end for `aluthge-core`.
//!
//! Exit codes: 0 success, 1 check failures, 2 usage or configuration
//! errors, 3 non-square input.

mod cli;
mod commands;
pub mod config;
pub mod error;
mod fsio;

use std::ffi::OsString;

use clap::Parser;

use cli::{Cli, Command};
pub use error::{exit, CliError};

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    let result = match &cli.command {
        Command::Transform(a) => commands::transform(a),
        Command::Iterate(a) => commands::iterate(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
