//! `coverdeg`: one command, one TOML report on standard output.
//!
//! Exit codes: 0 computed (including inconclusive searches and unknown
//! verdicts), 2 usage, 3 unreadable or malformed input, 4 invalid input,
//! 5 computation failure, 6 certificate rejected.

mod commands;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use coverdeg::io::IoError;
use coverdeg::search::{LabelMode, DEFAULT_BUDGET};

#[derive(Parser)]
#[command(name = "coverdeg", version, about = "Degree, Hopf invariant and KKM obstruction checks for covers")]
struct Cli {
    /// Worker threads for the parallel kernels (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a complex (and optionally a cover) and report its homology.
    Validate {
        complex: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
    },
    /// Degree of the map induced by a cover of a closed n-manifold with n+2 sets.
    Degree { complex: PathBuf, cover: PathBuf },
    /// Hopf invariant of a cover of a realized 3-sphere with 4 sets.
    Hopf { complex: PathBuf, cover: PathBuf },
    /// Decide whether a boundary cover extends over the interior.
    KkmVerify(SearchArgs),
    /// Search for an extension of a boundary cover.
    KkmExtend(SearchArgs),
    /// Decide whether two covers of the same complex are homotopic.
    Homotopic {
        complex: PathBuf,
        first: PathBuf,
        second: PathBuf,
        /// Barycentric subdivisions to try when no direct prism witness exists.
        #[arg(long, default_value_t = 0)]
        subdivide: usize,
    },
    /// Decide whether two covers are cobordant.
    Cobordant {
        first_complex: PathBuf,
        first_cover: PathBuf,
        second_complex: PathBuf,
        second_cover: PathBuf,
    },
    /// Decide whether a cover is cobordant to the empty cover.
    NullCobordant { complex: PathBuf, cover: PathBuf },
    /// Barycentric subdivision of a complex and, optionally, a cover.
    Subdivide {
        complex: PathBuf,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        subdivide: usize,
        #[arg(long)]
        out_complex: PathBuf,
        #[arg(long, requires = "cover")]
        out_cover: Option<PathBuf>,
    },
    /// Fully labelled simplices of a Sperner labelling.
    Sperner { complex: PathBuf, labels: PathBuf },
    /// Re-validate a certificate, or the certificate embedded in a report.
    Recheck { certificate: PathBuf },
}

#[derive(Args)]
struct SearchArgs {
    complex: PathBuf,
    boundary: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Singleton)]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Singleton,
    Subsets,
}

impl From<Mode> for LabelMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Singleton => LabelMode::Singleton,
            Mode::Subsets => LabelMode::Subsets,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Io(IoError),
    /// Input parses but is unsuitable; `at` is `file` or `file:line`.
    Invalid { at: String, message: String },
    Compute(String),
    Rejected { at: String, message: String },
    Usage(String),
}

impl From<IoError> for CliError {
    fn from(e: IoError) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Io(IoError::Read { .. } | IoError::Parse { .. }) => 3,
            CliError::Io(IoError::Validation { .. }) | CliError::Invalid { .. } => 4,
            CliError::Compute(_) => 5,
            CliError::Rejected { .. } => 6,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Invalid { at, message } => write!(f, "{at}: {message}"),
            CliError::Compute(m) | CliError::Usage(m) => f.write_str(m),
            CliError::Rejected { at, message } => write!(f, "{at}: certificate rejected: {message}"),
        }
    }
}

fn run(cli: Cli) -> Result<commands::Outcome, CliError> {
    #[cfg(feature = "parallel")]
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Compute(e.to_string()))?;
        return pool.install(|| commands::dispatch(cli.command));
    }
    commands::dispatch(cli.command)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            // a closed pipe downstream is not our failure
            let _ = std::io::stdout().write_all(out.report.as_bytes());
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
