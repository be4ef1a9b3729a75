//! The `streakcalc` command line.
//!
//! Exit codes: 0 success, 1 a verification or agreement check failed,
//! 2 usage error, 3 capacity limit exceeded. Data goes to stdout and
//! diagnostics to stderr.

mod commands;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

use crate::counts::DEFAULT_TABLE_CAP;
use crate::error::Error;
pub use output::{Cell, Envelope, Format, FORMAT_VERSION};

/// Environment variable overriding the count-table capacity.
pub const TABLE_CAP_ENV: &str = "STREAKCALC_TABLE_CAP";

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAPACITY: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "streakcalc",
    version,
    about = "Exact waiting-time statistics for runs of consecutive heads"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of g(n, k) for n = 0..=n_max
    Counts(CountsArgs),
    /// Expected waiting time by closed form, derivative, truncated series and simulation
    Expect(ExpectArgs),
    /// Monte Carlo estimate of the waiting time
    Simulate(SimulateArgs),
    /// Cross-validation battery over k = 1..=k_max
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct CountsArgs {
    #[arg(long)]
    k: u64,
    #[arg(long = "n-max")]
    n_max: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct ExpectArgs {
    #[arg(long = "k-min")]
    k_min: u64,
    #[arg(long = "k-max")]
    k_max: u64,
    /// Truncation of the series; defaults to min(64 * 2^k, 4096) per k
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Add a Monte Carlo column
    #[arg(long)]
    simulate: bool,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(long)]
    k: u64,
    /// Success probability, as a fraction ("1/2") or decimal ("0.5")
    #[arg(long, default_value = "1/2")]
    p: String,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Per-trial step cap; defaults to 1000 * 2^k
    #[arg(long = "max-steps")]
    max_steps: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long = "k-max")]
    k_max: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Process-level settings that do not come from flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub table_cap: usize,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            table_cap: DEFAULT_TABLE_CAP,
        }
    }
}

impl Settings {
    pub fn from_env() -> Result<Self, String> {
        match std::env::var(TABLE_CAP_ENV) {
            Ok(raw) => raw
                .trim()
                .parse()
                .map(|table_cap| Settings { table_cap })
                .map_err(|_| format!("{TABLE_CAP_ENV} must be a non-negative integer, got {raw:?}")),
            Err(_) => Ok(Settings::default()),
        }
    }
}

#[derive(Debug)]
pub(crate) enum CliError {
    Usage(String),
    Capacity(String),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        if e.is_capacity() {
            CliError::Capacity(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// Parses `args` (including the program name), reads settings from the
/// environment and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Settings::from_env() {
        Ok(settings) => run_with_settings(args, settings, out, err),
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

pub fn run_with_settings<I, T>(
    args: I,
    settings: Settings,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match cli.command {
        Command::Counts(a) => commands::counts(a, settings, out),
        Command::Expect(a) => commands::expect(a, settings, out),
        Command::Simulate(a) => commands::simulate(a, out),
        Command::Verify(a) => commands::verify(a, settings, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Capacity(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CAPACITY
        }
        Err(CliError::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_CAPACITY
        }
    }
}
