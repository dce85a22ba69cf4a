mod args;
mod commands;
mod envelope;
mod tables;

use std::io::Write;
use std::process;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, SizeCommand};
use envelope::{CliError, ExitCode};

fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Estimate(a) => commands::estimate(a),
        Command::Size { variant } => match variant {
            SizeCommand::Interval(a) => commands::size_interval(a),
            SizeCommand::Power(a) => commands::size_power(a),
        },
        Command::Decide(a) => commands::decide(a),
        Command::Power(a) => commands::power(a),
        Command::Plan(a) => commands::plan(a),
        Command::TwoStage(a) => commands::two_stage(a),
        Command::Curve(a) => commands::curve(a),
        Command::Validate(a) => commands::validate(a),
        Command::Tables(a) => commands::tables(a),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => match err.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                let _ = err.print();
                process::exit(ExitCode::Success as i32);
            }
            _ => {
                let text = err.to_string();
                let line = text
                    .lines()
                    .find(|l| l.starts_with("error:"))
                    .unwrap_or("error: invalid arguments")
                    .to_string();
                eprintln!("{line}");
                process::exit(ExitCode::Usage as i32);
            }
        },
    };
    let code = match run(&cli) {
        Ok(text) => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Ok(()) => ExitCode::Success,
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::Success,
                Err(e) => {
                    eprintln!("error: cannot write output: {e}");
                    ExitCode::Io
                }
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            err.code
        }
    };
    process::exit(code as i32);
}
