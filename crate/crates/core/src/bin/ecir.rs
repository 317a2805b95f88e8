use std::process::ExitCode;

use clap::Parser;
use ecir::cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("ecir: error: {e}");
            ExitCode::FAILURE
        }
    }
}
