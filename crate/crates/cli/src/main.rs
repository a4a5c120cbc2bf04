mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use crepant::Error;

use report::Report;

/// Crepant resolutions of abelian quotient complete-intersection
/// singularities from basic, coherent and balanced triangulations.
#[derive(Parser, Debug)]
#[command(name = "crepant", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the defining clauses of a datum and print its canonical form.
    Validate(Common),
    /// Build the simplex, its decomposition and the certified triangulation.
    Build(Common),
    /// Build the fan and check crepancy and smoothness.
    Resolve(Common),
    /// Compare δ-vector routes and print the Betti numbers.
    Cohomology(Common),
    /// Write the triangulation geometry (OFF by default).
    Export(Common),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Datum file in the `sets` or `forest` text form.
    #[arg(required_unless_present = "lattice", conflicts_with = "lattice")]
    pub input: Option<PathBuf>,
    /// Group given directly as `r:a1,…,ad` generators separated by `;`.
    #[arg(long)]
    pub lattice: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Omit the timing field so repeated runs are byte-identical.
    #[arg(long)]
    pub no_timing: bool,
    /// Write geometry, e.g. `off:cells.off`.
    #[arg(long, value_name = "KIND:PATH")]
    pub export: Option<ExportTarget>,
    /// Print every ε chosen while refining dilations.
    #[arg(long)]
    pub lambda_trace: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
}

#[derive(Clone, Debug)]
pub struct ExportTarget {
    pub path: PathBuf,
}

impl FromStr for ExportTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.split_once(':') {
            Some(("off", path)) if !path.is_empty() => Ok(Self { path: path.into() }),
            Some((kind, _)) if kind != "off" => Err(format!("unsupported export kind '{kind}' (only off)")),
            _ => Err("expected off:<path>".into()),
        }
    }
}

/// How a run ended, mapped onto the process exit status.
#[derive(Debug)]
pub enum Failure {
    /// A domain verdict came out negative (exit 1).
    Negative,
    /// Bad input or arguments (exit 2).
    Usage(String),
    /// Routes or certificates disagree with each other (exit 3).
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse { .. } => Failure::Usage(e.to_string()),
            Error::InvalidDatum(_) | Error::InvalidParameter { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

type Runner = fn(&Common) -> Result<Report, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let (opts, run): (&Common, Runner) = match &cli.command {
        Command::Validate(c) => (c, report::validate),
        Command::Build(c) => (c, report::build),
        Command::Resolve(c) => (c, report::resolve),
        Command::Cohomology(c) => (c, report::cohomology),
        Command::Export(c) => (c, report::export),
    };
    match run(opts) {
        Ok(mut r) => {
            if !opts.no_timing {
                r.set_seconds(start.elapsed().as_secs_f64());
            }
            let negative = r.negative;
            print!("{}", r.render(opts.format));
            if negative {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(Failure::Negative) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("cross-check failure: {msg}");
            ExitCode::from(3)
        }
    }
}
