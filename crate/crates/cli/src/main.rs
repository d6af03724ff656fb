mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use report::Which;

/// Finite quasigroups, their translation groups and measures, and the ax+b
/// group.
#[derive(Debug, Parser)]
#[command(name = "quasilab", version)]
pub struct Cli {
    /// Write the machine-readable JSON report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Worker threads for scans; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0, value_name = "N")]
    pub jobs: usize,
    /// Suppress the human-readable summary.
    #[arg(long, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct TableArg {
    /// Cayley table file.
    #[arg(long, value_name = "FILE")]
    pub table: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a table is a Latin square and report loop status.
    Validate(TableArg),
    /// Check an identity on every assignment of its variables.
    CheckIdentity {
        #[command(flatten)]
        table: TableArg,
        /// Identity text, e.g. "(x*y)*z = x*(y*z)".
        #[arg(long, conflicts_with = "builtin", required_unless_present = "builtin")]
        identity: Option<String>,
        /// Name of a built-in identity.
        #[arg(long)]
        builtin: Option<String>,
    },
    /// Print every left and right translation as an image array.
    Translations(TableArg),
    /// Summarize the group generated by translations.
    Mlt {
        #[command(flatten)]
        table: TableArg,
        #[arg(long, value_enum, default_value = "both")]
        which: Which,
    },
    /// Solve for quasi-invariant measures and their cocycles.
    Measure(TableArg),
    /// Solve for positive characters and audit the induced representation.
    Characters {
        #[command(flatten)]
        table: TableArg,
        /// Largest left multiplication group the audit will enumerate.
        #[arg(long, default_value_t = quasilab::perm_group::DEFAULT_ELEMENT_CAP)]
        cap: usize,
    },
    /// Checks on the ax+b group.
    Axb {
        #[command(subcommand)]
        action: AxbAction,
    },
    /// Tally identity satisfiers and loops over Latin squares of one order.
    KunenScan(ScanArgs),
    /// Re-read a JSON report and check its schema and invariants.
    ReportValidate {
        /// Report file.
        report: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum AxbAction {
    /// Run the invariance, Jacobian and modular-function suite.
    Verify {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub order: usize,
    /// Enumerate every square (the default).
    #[arg(long, conflicts_with = "sample")]
    pub full: bool,
    /// Scan K seeded random squares instead.
    #[arg(long, value_name = "K")]
    pub sample: Option<usize>,
    #[arg(long, requires = "sample", default_value_t = 0)]
    pub seed: u64,
    /// Permit a full scan of order 6.
    #[arg(long)]
    pub allow_n6: bool,
    /// Resume from and record progress to this file.
    #[arg(long, value_name = "FILE", conflicts_with = "sample")]
    pub checkpoint: Option<PathBuf>,
    /// Built-in identity to scan with.
    #[arg(long, default_value = "N1")]
    pub identity: String,
    /// Also solve for cocycles on every satisfier.
    #[arg(long, conflicts_with = "checkpoint")]
    pub modular: bool,
    /// Directory for counterexample tables.
    #[arg(long, value_name = "DIR", default_value = ".")]
    pub dump_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::dispatch(&cli) {
        Ok(commands::Verdict::Holds) => ExitCode::SUCCESS,
        Ok(commands::Verdict::Fails) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
