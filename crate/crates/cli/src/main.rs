use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use cohpower_cli::{configure_threads, run, Cli, THREADS_ENV};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(std::env::var(THREADS_ENV).ok().as_deref()).and_then(|()| run(&cli));
    match result {
        Ok(outcome) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(outcome.stdout.as_bytes()).and_then(|()| stdout.flush()).is_err() {
                return ExitCode::from(4);
            }
            ExitCode::from(outcome.exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
