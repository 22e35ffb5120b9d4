use std::process::ExitCode;

use clap::Parser;
use mvela::cli::Cli;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match mvela::cli::run(&cli) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
