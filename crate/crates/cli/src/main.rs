mod args;
mod commands;
mod config;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use config::RunConfig;

fn run(cli: Cli) -> anyhow::Result<bool> {
    let cfg = RunConfig::load(cli.config.as_deref(), cli.out_dir)?;
    match &cli.command {
        Command::Boundary(a) => commands::boundary(a, &cfg),
        Command::Verify(a) => commands::verify_cmd(a, &cfg),
        Command::Thresholds(a) => commands::thresholds(a, &cfg),
        Command::Annulus(a) => commands::annulus(a, &cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
