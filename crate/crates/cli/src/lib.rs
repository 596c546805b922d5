//! Command-line front end: matrix generation, file I/O and JSON certificate reports.
//!
//! Exit codes: 0 on success, 1 on usage or input errors, 2 when a computation
//! fails (enumeration guards, rank deficiency, solver breakdown, ...).

pub mod io;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use spcert_core::cert::{
    max_certified_k, recovery_experiment, BalancednessReport, ExperimentMode, ExperimentOutcome,
};
use spcert_core::coherence::{coherence_with_tol, normalize_columns, CoherenceReport};
use spcert_core::gen::{gen_gaussian, gen_id_hadamard};
use spcert_core::lp::CONTRACT_TOL;
use spcert_core::{null_space_basis, DenseMatrix, Error, DEFAULT_RANK_TOL};

use crate::io::{load_matrix, matrix_to_string, report_to_string, MatrixFormat};
use crate::report::{certify, CertifyOptions, TOOL_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_COMPUTE: i32 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "spcert",
    version,
    about = "Sparse-recovery certificates for measurement matrices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Matrix file format (default: from the file extension, json otherwise).
    #[arg(long, global = true, value_parser = ["csv", "json"])]
    format: Option<String>,

    /// Worker threads for the inner computations.
    #[arg(long, global = true, value_name = "INT")]
    threads: Option<usize>,

    /// Contractual tolerance for dictionary and bound comparisons.
    #[arg(long, global = true, default_value_t = CONTRACT_TOL, value_name = "REAL")]
    tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a measurement matrix.
    #[command(subcommand)]
    Gen(GenKind),
    /// γ₁,∞-width and the bound k₁.
    Width(Input),
    /// Coherence and the bound k₂ of a dictionary.
    Coherence(Input),
    /// Full certificate: width, coherence and (with --kcap) exact balancedness.
    Certify(BalancedInput),
    /// Planted recovery experiment with basis pursuit.
    Recover(RecoverArgs),
    /// Exact strict k-balancedness scan.
    Balanced(BalancedInput),
}

#[derive(Subcommand, Debug)]
enum GenKind {
    /// i.i.d. standard normal entries (ChaCha8 + Box-Muller).
    Gaussian {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Scale columns to unit norm.
        #[arg(long)]
        normalize: bool,
    },
    /// The m×2m dictionary [I | H/√m] for m a power of two.
    Hadamard {
        #[arg(long)]
        m: usize,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// Matrix file (json or csv).
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Scale columns to unit norm before analysis.
    #[arg(long)]
    normalize: bool,
}

#[derive(Args, Debug)]
struct BalancedInput {
    #[command(flatten)]
    input: Input,
    /// Largest sparsity to certify exactly.
    #[arg(long)]
    kcap: Option<usize>,
}

#[derive(Args, Debug)]
struct RecoverArgs {
    #[command(flatten)]
    input: Input,
    /// Sparsity of the planted vectors.
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "exhaustive", value_parser = ["exhaustive", "random"])]
    mode: String,
    #[arg(long, default_value_t = 1)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Serialize)]
struct Tagged<'a, T: Serialize> {
    matrix_id: &'a str,
    #[serde(flatten)]
    body: T,
    tool_version: &'a str,
}

enum Failure {
    Usage(String),
    Compute(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_)
            | Error::Parse { .. }
            | Error::DimensionMismatch(_)
            | Error::InvalidMatrix(_) => Failure::Usage(e.to_string()),
            other => Failure::Compute(other),
        }
    }
}

/// Parses `argv` (including the program name) and runs one command.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let _ = write!(stderr, "{}", e.render());
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };

    let outcome = match cli.threads {
        Some(threads) => match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Failure::Usage(format!(
                "cannot start {threads} threads: {e}"
            ))),
        },
        None => execute(&cli),
    };

    let text = match outcome {
        Ok((text, summary)) => {
            let _ = writeln!(stderr, "{summary}");
            text
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            let _ = writeln!(
                stderr,
                "usage: spcert <gen|width|coherence|certify|recover|balanced> [options]"
            );
            return EXIT_USAGE;
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_COMPUTE;
        }
    };

    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    EXIT_OK
}

fn format_arg(cli: &Cli) -> Option<MatrixFormat> {
    cli.format
        .as_deref()
        .map(|f| f.parse().expect("clap restricts the values"))
}

fn matrix_id(path: &Path) -> String {
    path.file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn load(cli: &Cli, input: &Input) -> Result<DenseMatrix, Failure> {
    let a = load_matrix(&input.input, format_arg(cli))?;
    if input.normalize {
        Ok(normalize_columns(&a)?)
    } else {
        Ok(a)
    }
}

fn tagged<T: Serialize>(id: &str, body: T) -> Result<String, Failure> {
    Ok(report_to_string(&Tagged {
        matrix_id: id,
        body,
        tool_version: TOOL_VERSION,
    })?)
}

/// Returns the output document and a one-line summary for stderr.
fn execute(cli: &Cli) -> Result<(String, String), Failure> {
    match &cli.command {
        Command::Gen(kind) => {
            let a = match *kind {
                GenKind::Gaussian {
                    m,
                    n,
                    seed,
                    normalize,
                } => gen_gaussian(m, n, seed, normalize),
                GenKind::Hadamard { m } => gen_id_hadamard(m),
            }
            .map_err(|e| Failure::Usage(e.to_string()))?;
            let summary = format!("generated {}x{} matrix", a.rows(), a.cols());
            Ok((
                matrix_to_string(&a, format_arg(cli).unwrap_or(MatrixFormat::Json)),
                summary,
            ))
        }
        Command::Width(input) => {
            let a = load(cli, input)?;
            let rep = certify(
                &a,
                &matrix_id(&input.input),
                &CertifyOptions {
                    k_cap: None,
                    tol: cli.tol,
                },
            )?;
            let summary = format!("gamma = {:.10}, k1 = {}", rep.gamma, rep.k1);
            Ok((report_to_string(&rep)?, summary))
        }
        Command::Certify(args) => {
            let a = load(cli, &args.input)?;
            let rep = certify(
                &a,
                &matrix_id(&args.input.input),
                &CertifyOptions {
                    k_cap: args.kcap,
                    tol: cli.tol,
                },
            )?;
            let show = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            let summary = format!(
                "gamma = {:.10}, k1 = {}, M = {}, k2 = {}, k* = {}",
                rep.gamma,
                rep.k1,
                show(rep.coherence.map(|m| format!("{m:.10}"))),
                show(rep.k2.map(|k| k.to_string())),
                show(rep.k_star.map(|k| k.to_string())),
            );
            Ok((report_to_string(&rep)?, summary))
        }
        Command::Coherence(input) => {
            let a = load(cli, input)?;
            let rep: CoherenceReport = coherence_with_tol(&a, cli.tol)?;
            let summary = format!("M = {:.10}, k2 = {}", rep.coherence, rep.k2);
            Ok((tagged(&matrix_id(&input.input), rep)?, summary))
        }
        Command::Balanced(args) => {
            let a = load(cli, &args.input)?;
            let basis = null_space_basis(&a, DEFAULT_RANK_TOL)?;
            let cap = args.kcap.unwrap_or(a.cols() - 1).min(a.cols() - 1);
            let rep: BalancednessReport = max_certified_k(&basis, cap)?;
            let summary = format!(
                "k* = {} (cap {}), worst mu = {:.10}",
                rep.k_star, cap, rep.worst_mu
            );
            Ok((tagged(&matrix_id(&args.input.input), rep)?, summary))
        }
        Command::Recover(args) => {
            let a = load(cli, &args.input)?;
            let mode: ExperimentMode = args.mode.parse()?;
            let rep: ExperimentOutcome =
                recovery_experiment(&a, args.k, mode, args.trials, args.seed)?;
            let summary = format!(
                "k = {}: {}/{} recovered ({})",
                rep.k, rep.successes, rep.trials, rep.mode
            );
            Ok((tagged(&matrix_id(&args.input.input), rep)?, summary))
        }
    }
}
