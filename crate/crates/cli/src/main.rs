use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mttf_trend_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let arguments = std::env::args().skip(1).collect();
    let result = execute(&cli.command, arguments).and_then(|report| {
        std::io::stdout().write_all(report.render(cli.format).as_bytes())?;
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
