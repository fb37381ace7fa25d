use std::process::ExitCode;

use amphase_cli::args::Cli;
use amphase_cli::EXIT_ERROR;
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match amphase_cli::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    ExitCode::from(code as u8)
}
