use std::process::ExitCode;

use clap::Parser;

use gqm_cli::{emit, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // --help and --version also arrive here and are not errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("gqm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(cli: Cli) -> Result<u8, CliError> {
    let config = cli.into_config()?;
    let report = run(&config)?;
    emit(&report, &config)?;
    if report.passed == Some(false) {
        if let Some(f) = &report.failure {
            eprintln!("gqm: verification failed: {f}");
        }
        return Ok(1);
    }
    Ok(0)
}
