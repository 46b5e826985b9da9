//! Command-line frontend for the `darboux` numerics: parameter sweeps as
//! CSV, density profiles, and recomputation of embedded reference tables.

pub mod args;
pub mod commands;
pub mod error;
pub mod format;
pub mod quantities;
pub mod tables;
pub mod values;

use std::io::Write;

use clap::Parser;

pub use error::{CliError, CliResult, EXIT_MISMATCH, EXIT_NUMERIC, EXIT_USAGE};

/// Parses `argv`, runs the command and writes its output; returns the exit
/// code. Panics are caught and reported as numeric failures.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("error: invalid arguments");
            eprintln!("{first}");
            return EXIT_USAGE;
        }
    };
    std::panic::set_hook(Box::new(|_| {}));
    let result = std::panic::catch_unwind(|| commands::execute(&cli.command));
    let _ = std::panic::take_hook();
    match result {
        Ok(Ok(outcome)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(outcome.stdout.as_bytes());
            let _ = stdout.flush();
            match outcome.mismatch {
                Some(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
                None => 0,
            }
        }
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        Err(_) => {
            eprintln!("error: numeric failure in cli: internal error");
            EXIT_NUMERIC
        }
    }
}
