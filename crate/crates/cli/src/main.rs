mod cli;
mod commands;
mod config;
mod error;
mod table;

use std::process::ExitCode;

use clap::error::ErrorKind as ClapErrorKind;
use clap::Parser;
use spinchain_core::PhysicalParams;

use cli::Cli;
use commands::Context;
use config::FileConfig;
use error::{CliError, EXIT_OK, EXIT_USAGE};
use table::Format;

fn context(cli: &Cli) -> Result<Context, CliError> {
    let g = &cli.global;
    let file = match &g.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    let params = PhysicalParams::new(
        g.anisotropy.or(file.anisotropy).unwrap_or(2.0),
        g.field.or(file.field).unwrap_or(0.0),
        g.mu.or(file.mu).unwrap_or(1.0),
        g.hbar.or(file.hbar).unwrap_or(1.0),
    )?;
    Ok(Context {
        params,
        seed: g.seed.or(file.seed),
        format: g.format.or(file.format).unwrap_or(Format::Csv),
        out: g.out.clone().or(file.out),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match context(&cli).and_then(|ctx| commands::run(&cli.command, &ctx)) {
        Ok(()) => ExitCode::SUCCESS,
        // downstream reader closed early (e.g. `| head`)
        Err(CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spinchain: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
