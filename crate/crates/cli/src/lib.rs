//! Command-line front end for `noonsim`.
//!
//! Exit codes: 0 on success, 1 for domain or I/O failures, 2 for usage errors.
//! Output is assembled in memory and written only after the run succeeds, so
//! a failed run never creates or truncates the `--out` file.

pub mod args;
pub mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::{Cli, Command, Format};
pub use output::{emit, render, Num, Report, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] noonsim::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Domain(_) | CliError::Io { .. } => 1,
        }
    }
}

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(argv, &mut io::stdout().lock(), &mut io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(stderr, "{}", e.render());
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command, stdout: &mut dyn Write) -> Result<(), CliError> {
    command.validate()?;
    let report = commands::execute(command)?;
    let out = command.output();
    let bytes = render(&report, out.format).map_err(|source| io_error(out.out.as_ref(), source))?;
    match &out.out {
        Some(path) => std::fs::write(path, &bytes).map_err(|source| io_error(Some(path), source)),
        None => stdout.write_all(&bytes).and_then(|_| stdout.flush()).map_err(|source| io_error(None, source)),
    }
}

fn io_error(path: Option<&PathBuf>, source: io::Error) -> CliError {
    let path = path.map_or_else(|| "<stdout>".to_string(), |p| p.display().to_string());
    CliError::Io { path, source }
}
