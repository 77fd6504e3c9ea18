use std::process::ExitCode;

use clap::Parser;
use rkeig_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(stage) = e.stage() {
                eprintln!("stage: {stage}");
            }
            if matches!(e, CliError::Usage(_)) {
                eprintln!("run `rkeig --help` for usage");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
