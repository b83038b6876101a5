//! `hdw`: cohomology, measures, partition functions, bordism matrices and
//! verification runs on triangulated manifolds.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hdw_core::{ActionSpec, DwTheory, Error, FiniteAbelianGroup};

#[derive(Parser)]
#[command(name = "hdw", version, about = "Higher Dijkgraaf-Witten invariants of triangulated manifolds")]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, global = true, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ActionArg {
    Trivial,
    CupSquare,
}

/// Field degree, coefficients and action.
#[derive(Args, Clone, Debug)]
pub struct TheoryArgs {
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// Coefficient group as cyclic orders, `2,4` for Z2+Z4; empty for 0.
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long, value_enum, default_value = "trivial")]
    pub action: ActionArg,
    #[arg(long, default_value_t = 1)]
    pub lambda: i64,
    /// Largest group whose elements may be enumerated.
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub limit: u64,
}

impl TheoryArgs {
    pub fn group(&self) -> Result<FiniteAbelianGroup, Error> {
        FiniteAbelianGroup::parse(&self.gamma)
    }

    pub fn action(&self) -> ActionSpec {
        match self.action {
            ActionArg::Trivial => ActionSpec::Trivial,
            ActionArg::CupSquare => ActionSpec::cup_square(self.lambda),
        }
    }

    pub fn theory(&self) -> Result<DwTheory, Error> {
        Ok(DwTheory::new(self.p, self.group()?, self.action()).with_limit(self.limit))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cohomology groups in the requested degrees.
    Cohomology {
        file: PathBuf,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        gamma: String,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2")]
        degrees: Vec<usize>,
        /// Relative to a named subcomplex, or `boundary`.
        #[arg(long)]
        relative: Option<String>,
        /// Also list class coordinates.
        #[arg(long)]
        classes: bool,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        limit: u64,
    },
    /// The measure factor, or the measure identity for a subcomplex.
    Measure {
        file: PathBuf,
        #[command(flatten)]
        theory: TheoryArgs,
        /// Interior subcomplex `N` to check `μ_M = |K| μ_(M,N) μ_N` for.
        #[arg(long)]
        sub: Option<String>,
    },
    /// Partition function of a closed manifold.
    Partition {
        file: PathBuf,
        #[command(flatten)]
        theory: TheoryArgs,
    },
    /// Basis and inner product of the state space of a closed manifold.
    StateSpace {
        file: PathBuf,
        #[command(flatten)]
        theory: TheoryArgs,
    },
    /// Matrix of a bordism between two named boundary subcomplexes.
    Bordism {
        file: PathBuf,
        #[arg(long)]
        incoming: String,
        #[arg(long)]
        outgoing: String,
        #[command(flatten)]
        theory: TheoryArgs,
    },
    /// Glues along the file's gluing data and compares both sides.
    Glue {
        file: PathBuf,
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Runs the verification suite, on the built-in corpus when no files
    /// are given.
    Verify {
        files: Vec<PathBuf>,
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Comma-separated subset of lemma,gluing,excision,dagger,monoidal,gauge.
        #[arg(long)]
        checks: Option<String>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive cochain enumeration: orders, partition function and the
    /// class-wise action table.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        theory: TheoryArgs,
        #[arg(long, value_delimiter = ',')]
        degrees: Option<Vec<usize>>,
        #[arg(long)]
        classes: bool,
    },
}

/// Outcome of a command: a report, and whether what it verifies held.
pub struct Outcome {
    pub report: serde_json::Value,
    pub table: Vec<String>,
    pub ok: bool,
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    use commands::*;
    match cli.command {
        Command::Cohomology {
            file,
            gamma,
            degrees,
            relative,
            classes,
            limit,
        } => cohomology(&file, &gamma, &degrees, relative.as_deref(), classes, limit),
        Command::Measure { file, theory, sub } => measure(&file, &theory, sub.as_deref()),
        Command::Partition { file, theory } => partition(&file, &theory),
        Command::StateSpace { file, theory } => state_space(&file, &theory),
        Command::Bordism {
            file,
            incoming,
            outgoing,
            theory,
        } => bordism(&file, &incoming, &outgoing, &theory),
        Command::Glue { file, theory, tol } => glue(&file, &theory, tol),
        Command::Verify {
            files,
            theory,
            tol,
            checks,
            trials,
            seed,
        } => verify(&files, &theory, tol, checks.as_deref(), trials, seed),
        Command::Oracle {
            file,
            theory,
            degrees,
            classes,
        } => oracle(&file, &theory, degrees, classes),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::EnumerationLimitExceeded { .. } | Error::OracleTooLarge(_) => 3,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.format;
    match run(cli) {
        Ok(outcome) => {
            output::print(&outcome, format);
            if outcome.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
