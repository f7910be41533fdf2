mod args;
mod commands;
mod error;
mod report;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use args::{Cli, Command, Format};
use error::{CliError, Result, EXIT_USAGE, EXIT_VERIFY_FAILED};

fn set_workers(workers: Option<usize>) -> Result<()> {
    let Some(n) = workers else { return Ok(()) };
    if n == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("cannot size the worker pool: {e}")))?;
    #[cfg(not(feature = "parallel"))]
    if n > 1 {
        eprintln!("warning: built without the parallel feature; running on one thread");
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    set_workers(cli.workers)?;
    let format = cli.format.unwrap_or(match cli.command {
        Command::Count(_) | Command::Oracle(_) => Format::Csv,
        _ => Format::Json,
    });
    if format == Format::Svg && matches!(cli.command, Command::Verify(_)) {
        return Err(CliError::Usage("verify has no plot; use --format csv or json".into()));
    }
    let start = Instant::now();
    let report = match &cli.command {
        Command::Count(a) => commands::count(a)?,
        Command::Boxdim(a) => commands::boxdim(a)?,
        Command::Spectrum(a) => commands::spectrum(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Oracle(a) => commands::oracle(a)?,
    };
    let wall = cli.timing.then(|| start.elapsed().as_secs_f64());
    let bytes = report.render(format, wall)?;
    report::emit(&bytes, cli.output.as_deref())?;
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY_FAILED as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
