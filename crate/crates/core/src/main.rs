use std::process::ExitCode;

use clap::Parser;
use sdof::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("sdof: error: {e}");
            ExitCode::FAILURE
        }
    }
}
