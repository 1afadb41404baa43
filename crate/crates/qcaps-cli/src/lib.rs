//! Command-line experiment runner for quantum capsule networks.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod experiments;

use clap::Parser;

pub use cli::{Cli, Command, CommonArgs};
pub use error::{CliError, CliResult};

/// Parse `args` (program name first), run, print the summary and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(&cli.command) {
        Ok(summary) => {
            println!("{summary}");
            0
        }
        Err(e) => {
            match &e {
                CliError::Failed(report) => println!("{report}"),
                other => eprintln!("error: {other}"),
            }
            e.exit_code()
        }
    }
}
