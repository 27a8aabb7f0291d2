mod args;
mod commands;
mod complex;
mod output;
mod svg;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Settings};
use commands::CliError;

fn settings(cli: &Cli) -> Result<Settings, CliError> {
    let flags = cli.command.settings().clone();
    let Some(path) = flags.config.clone() else {
        return Ok(flags);
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let file: Settings = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
    Ok(flags.over(file))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = settings(&cli).and_then(|s| commands::run(cli.command.name(), &s));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
