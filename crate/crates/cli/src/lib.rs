//! Command-line driver for the J1-J2 spin chain laboratory.
//!
//! [`run`] parses a command line, executes one subcommand, writes its result
//! as CSV or as a JSON [`record::ResultRecord`], and prints a one-line summary.
//! Exit statuses: 0 success, 1 numerical or I/O failure, 2 usage error.

pub mod args;
mod commands;
pub mod error;
pub mod record;
pub mod sweep;

use std::fs::File;
use std::io::{BufWriter, Write};

use clap::Parser;

use args::{Cli, Command, Format};
use error::{CliError, CliResult, EXIT_OK, EXIT_USAGE};
use record::ResultRecord;

/// Runs one command line (`argv[0]` is the program name) and returns the
/// process exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("j1j2: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: &Command) -> CliResult<()> {
    let outcome = match command {
        Command::Verify(a) => commands::verify(a)?,
        Command::Ed(a) => commands::ed(a)?,
        Command::Bae(a) => commands::bae(a)?,
        Command::ThermoDensity(a) => commands::thermo_density(a)?,
        Command::Dispersion(a) => commands::dispersion(a)?,
        Command::Gap(a) => commands::gap_sweep(a)?,
        Command::RealityScan(a) => commands::reality_scan(a)?,
    };
    let path = outcome.config.out.clone();
    let format = outcome.config.format;
    let record = ResultRecord::new(outcome.config, outcome.payload);
    write_record(&record, format, &path)?;
    println!("{} -> {}", outcome.summary, path.display());
    match outcome.failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(()),
    }
}

/// Writes the payload as CSV, or the whole record as pretty JSON.
pub fn write_record(record: &ResultRecord, format: Format, path: &std::path::Path) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    let mut sink = BufWriter::new(File::create(path)?);
    match format {
        Format::Csv => record.payload.write_csv(&mut sink)?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut sink, record)?;
            sink.write_all(b"\n")?;
        }
    }
    sink.flush()?;
    Ok(())
}
