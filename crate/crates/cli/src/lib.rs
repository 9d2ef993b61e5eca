//! Command-line front end: CSV and schema ingestion, and the `analyze`,
//! `partition`, `simulate` and `demo` commands.

pub mod args;
pub mod commands;
pub mod error;
pub mod schema;
pub mod table;

pub use args::{Cli, Command};

/// Runs a parsed command, writing human-readable output to `out`.
pub fn run(cli: &Cli, out: &mut impl std::io::Write) -> anyhow::Result<()> {
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a, out),
        Command::Partition(a) => commands::partition(a, out),
        Command::Simulate(a) => commands::simulate(a, out),
        Command::Demo(a) => commands::demo(a, out),
    }
}
