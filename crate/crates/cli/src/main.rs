//! `modvar` command-line tool.
//!
//! Exit codes: 0 on success, 1 for usage and validation errors, 2 for
//! filesystem errors.

mod args;
mod commands;
mod error;
mod plot;
mod report;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let argv: Vec<std::ffi::OsString> = std::env::args_os().collect();
    let cli = match args::Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let command = argv.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match commands::run(cli, command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
