use std::process::ExitCode;

use cfcolor_cli::{configure_threads, execute, Cli, EXIT_USAGE, THREADS_ENV};
use clap::Parser;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let result = configure_threads(std::env::var(THREADS_ENV).ok()).and_then(|_| execute(cli));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("cfcolor: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
