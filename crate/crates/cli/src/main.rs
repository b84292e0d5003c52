mod args;
mod commands;
mod config;
mod error;
mod input;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::{run, Env};
use config::Config;
use error::CliError;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            let err = CliError::Usage(first.trim_start_matches("error: ").to_string());
            report(&err, std::env::args().any(|a| a == "--json"));
            return ExitCode::from(err.exit_code());
        }
    };
    let config = match cli.config.as_deref().map(Config::load).transpose() {
        Ok(c) => c.unwrap_or_default(),
        Err(err) => {
            report(&err, cli.json);
            return ExitCode::from(err.exit_code());
        }
    };
    let env = Env {
        config: &config,
        json: cli.json,
        env_seed: std::env::var("LJMSE_SEED").ok(),
    };
    match run(&cli.command, &env) {
        Ok(out) => {
            let _ = std::io::stdout().lock().write_all(out.stdout.as_bytes());
            let _ = std::io::stderr().lock().write_all(out.stderr.as_bytes());
            ExitCode::from(out.code)
        }
        Err(err) => {
            report(&err, cli.json);
            ExitCode::from(err.exit_code())
        }
    }
}

/// One line: JSON on stdout under `--json`, text on stderr otherwise.
fn report(err: &CliError, json: bool) {
    if json {
        println!("{}", err.to_json());
    } else {
        eprintln!("{}", err.line());
    }
}
