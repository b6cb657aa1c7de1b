use std::io;
use std::process::ExitCode;

use clap::Parser;
use dqsense::cli::{self, Cli};

fn main() -> ExitCode {
    let args = match Cli::try_parse() {
        Ok(a) => a,
        Err(e) => e.exit(),
    };
    let mut stdout = io::stdout().lock();
    match cli::execute(&args, &mut stdout) {
        Ok(()) => ExitCode::from(cli::EXIT_OK as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
