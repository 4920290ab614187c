//! Library side of the `amk` command-line tool.

pub mod args;
pub mod commands;
pub mod table;

use std::io::Write;

use thiserror::Error;

use crate::args::{Cli, Command, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] amk_core::Error),
    #[error("{0}")]
    Invalid(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY_FAILED: u8 = 1;
pub const EXIT_INVALID: u8 = 2;

/// Run a parsed command, writing its report; returns the process exit code.
pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let (outcome, output, default_format) = match &cli.command {
        Command::Pe(a) => (commands::pe(a)?, &a.output, Format::Text),
        Command::Sweep(a) => (commands::sweep(a)?, &a.output, Format::Csv),
        Command::Threshold(a) => (commands::threshold(a)?, &a.output, Format::Text),
        Command::Verify(a) => (commands::verify(a)?, &a.output, Format::Text),
    };
    let rendered = outcome.report.render(output.format.unwrap_or(default_format))?;
    match &output.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => std::io::stdout().lock().write_all(rendered.as_bytes())?,
    }
    Ok(if outcome.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}
