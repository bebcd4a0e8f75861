mod cli;
mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::cli::{Cli, Command};
use crate::config::FileConfig;
use crate::error::Result;
use crate::output::{Context, OutputFormat};

const DEFAULT_SEED: u64 = 1;

fn run(cli: Cli) -> Result<()> {
    let cfg = FileConfig::load(cli.config.as_deref(), cli.command.name())?;
    let ctx = Context {
        seed: cfg.or(cli.seed, "seed")?.unwrap_or(DEFAULT_SEED),
        out: cfg.or(cli.out, "out")?,
        format: cfg.or(cli.format, "format")?.unwrap_or(OutputFormat::Text),
    };
    match cli.command {
        Command::Simulate(a) => commands::simulate::run(a, &cfg, &ctx),
        Command::Serve(a) => commands::serve::run(a, &cfg, &ctx),
        Command::Verdict(a) => commands::verdict::run(a, &cfg, &ctx),
        Command::Evaluate(a) => commands::evaluate::run(a, &cfg, &ctx),
        Command::ExportReport(a) => commands::export::run(a, &cfg, &ctx),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pondwatch: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
