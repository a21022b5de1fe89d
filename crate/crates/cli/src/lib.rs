//! Command-line front end: config ingestion, validation, run orchestration
//! and report emission.
//!
//! Exit codes are a stable contract: 0 success, 2 config error, 3 I/O
//! error, 4 insufficient data.

pub mod args;
pub mod commands;
pub mod error;
pub mod files;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use args::{Cli, Command, PlanCommand};
pub use error::{CliError, CliResult, ExitKind};

/// Parse `argv` and run the command, returning the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { ExitKind::Config as i32 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(rendered.as_bytes())
            } else {
                stderr.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

pub fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Simulate(a) => commands::simulate::run(a, stderr),
        Command::Nmsrd(a) => commands::nmsrd::run(a, stderr),
        Command::Balance(a) => commands::balance::run(a, stderr),
        Command::Plan(PlanCommand::Validate { config, sessions }) => {
            commands::plan::validate(config, *sessions, stdout)
        }
    }
}
