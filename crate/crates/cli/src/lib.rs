//! The `ctrees` command-line harness. [`run`] is the whole program; the
//! binary only forwards its exit code.

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

pub mod args;
mod commands;
pub mod error;
pub mod output;

pub use args::{Cli, Command};
pub use commands::compare_rows;
pub use error::{exit, CliError, CliResult};
pub use output::CompareRow;

/// Parses `argv`, runs the subcommand and returns the process exit code.
pub fn run<I, T, O, E>(argv: I, out: &mut O, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    O: Write + ?Sized,
    E: Write + ?Sized,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    exit::SUCCESS
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    exit::USAGE
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => exit::SUCCESS,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch<O: Write + ?Sized>(cli: &Cli, out: &mut O) -> CliResult<()> {
    let g = &cli.global;
    if !(g.tol > 0.0) {
        return Err(CliError::Usage("--tol must be positive".into()));
    }
    match &cli.command {
        Command::Count(spec) => commands::count(g, spec, out),
        Command::Spectrum(spec) => commands::spectrum(g, spec, out),
        Command::Compare(args) => commands::compare(g, args, out),
        Command::Conjecture { n_min, n_max } => commands::conjecture(g, *n_min, *n_max, out),
        Command::EstimateAlpha { beta, n } => commands::estimate(g, *beta, &n.0, out),
        Command::Specfun { name, args } => commands::specfun(g, name, args, out),
    }
}
