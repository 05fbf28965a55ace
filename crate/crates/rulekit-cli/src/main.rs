//! Command-line front end: validate, evaluate, reduce, verify and report.
//!
//! Exit codes: 0 success, 1 invariant violation / failed verification /
//! operational error, 2 parse error, 64 usage error. Reports go to
//! stdout, diagnostics to stderr; identical invocations produce
//! byte-identical output.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

pub(crate) const EXIT_OK: u8 = 0;
pub(crate) const EXIT_FAILURE: u8 = 1;
pub(crate) const EXIT_PARSE: u8 = 2;
pub(crate) const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "rulekit",
    version,
    about = "Inspect, measure, reduce and verify rule-based classification systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a schema and rule system and check every invariant.
    Validate(ValidateArgs),
    /// Measure accuracy, coverage and compactness against a dataset.
    Evaluate(EvaluateArgs),
    /// Run the greedy reduction pass and emit the reduced system.
    Reduce(ReduceArgs),
    /// Check that a reduced system is a sound reduction of an original.
    Verify(VerifyArgs),
    /// Run the bundled fixtures end to end and emit a markdown report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum PolicyArg {
    Strict,
    AnyCorrect,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum GuardArg {
    Rules,
    Data,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum FormatArg {
    Table,
    Interchange,
    Markdown,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum FixtureArg {
    Toy,
    Bankruptcy,
}

#[derive(Args)]
pub(crate) struct ValidateArgs {
    /// Rule system file (DSL or interchange JSON).
    pub system: PathBuf,
    /// Schema file; defaults to the schema embedded in the system file.
    #[arg(long)]
    pub schema: Option<PathBuf>,
}

#[derive(Args)]
pub(crate) struct EvaluateArgs {
    /// Rule system file (DSL or interchange JSON).
    pub system: PathBuf,
    /// Schema file; defaults to the schema embedded in the system file.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Labeled dataset (CSV with a header line).
    #[arg(long)]
    pub dataset: PathBuf,
    /// Explicit column order, replacing the CSV header.
    #[arg(long, value_delimiter = ',')]
    pub columns: Option<Vec<String>>,
    /// Name of the label column.
    #[arg(long, default_value = "class")]
    pub label_column: String,
    /// How covered rows are judged correct.
    #[arg(long, value_enum, default_value = "strict")]
    pub policy: PolicyArg,
    /// Also compute exact description-space coverage.
    #[arg(long)]
    pub space: bool,
    /// Largest description space that will be enumerated.
    #[arg(long, default_value_t = 1_000_000)]
    pub space_limit: u64,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
}

#[derive(Args)]
pub(crate) struct ReduceArgs {
    /// Rule system file (DSL or interchange JSON).
    pub system: PathBuf,
    /// Schema file; defaults to the schema embedded in the system file.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Gate removals on rule exclusivity alone, or also on dataset accuracy.
    #[arg(long, value_enum, default_value = "rules")]
    pub guard: GuardArg,
    /// Labeled dataset, required with --guard data.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Drop rules subsumed by same-class rules after reducing.
    #[arg(long)]
    pub prune: bool,
    /// Write the reduced system here instead of stdout.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Write the reduction log (interchange JSON) here.
    #[arg(long)]
    pub log: Option<PathBuf>,
    /// Serialization of the reduced system.
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
}

#[derive(Args)]
pub(crate) struct VerifyArgs {
    /// The original rule system.
    pub original: PathBuf,
    /// The claimed reduction of it.
    pub reduced: PathBuf,
    /// Schema file; defaults to the schema embedded in the original.
    #[arg(long)]
    pub schema: Option<PathBuf>,
    /// Labeled dataset for the coverage comparison.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    /// Largest description space that will be enumerated.
    #[arg(long, default_value_t = 1_000_000)]
    pub space_limit: u64,
    #[arg(long, value_enum, default_value = "table")]
    pub format: FormatArg,
}

#[derive(Args)]
pub(crate) struct ReportArgs {
    /// Which bundled fixture family to report on.
    #[arg(long, value_enum)]
    pub fixture: FixtureArg,
}

/// A failure with its process exit code; message goes to stderr.
pub(crate) struct CliFailure {
    pub code: u8,
    pub message: String,
}

impl CliFailure {
    pub fn usage(message: impl Into<String>) -> CliFailure {
        CliFailure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<rulekit::Error> for CliFailure {
    fn from(err: rulekit::Error) -> CliFailure {
        let code = match &err {
            rulekit::Error::Syntax(_) => EXIT_PARSE,
            rulekit::Error::GuardRequiresDataset => EXIT_USAGE,
            _ => EXIT_FAILURE,
        };
        CliFailure {
            code,
            message: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliFailure {
    fn from(err: std::io::Error) -> CliFailure {
        CliFailure {
            code: EXIT_FAILURE,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = err.print();
                    ExitCode::from(EXIT_OK)
                }
                _ => {
                    eprint!("{err}");
                    ExitCode::from(EXIT_USAGE)
                }
            };
        }
    };

    let outcome = match cli.command {
        Command::Validate(args) => commands::validate(&args),
        Command::Evaluate(args) => commands::evaluate(&args),
        Command::Reduce(args) => commands::reduce(&args),
        Command::Verify(args) => commands::verify(&args),
        Command::Report(args) => report::run(&args),
    };

    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            eprintln!("rulekit: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
