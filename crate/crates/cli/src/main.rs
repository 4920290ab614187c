use std::process::ExitCode;

use amk_cli::args::Cli;
use amk_cli::{run, EXIT_INVALID};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("amk: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
