//! Command-line harness: `verify`, `analyze` and `ks-color`, emitting one
//! report record per check.

pub mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use ontic_core::models::ModelKind;

pub use commands::{Check, ColorOptions};
pub use report::{Format, ReportRecord, Verdict};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Core(#[from] ontic_core::Error),
    #[error("serialization: {0}")]
    Json(#[from] serde_json::Error),
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: ontic_core::Error| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "ontic", version, about = "Verify and analyze ontological models of qubits")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo samples per integral (at least 1000).
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Support threshold, in (0, 1e-3].
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub epsilon: f64,
    /// Restrict to one model: bb, ks, bell1, bell2, aerts, aaronson.
    #[arg(long, global = true, value_parser = parse_model)]
    pub model: Option<ModelKind>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compare model predictions with quantum probabilities on random pairs.
    Verify {
        #[arg(value_parser = parse_model)]
        model: Option<ModelKind>,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
    },
    /// Run one structural analysis over the selected models.
    Analyze {
        #[arg(value_enum)]
        check: Check,
        /// Points drawn per support comparison.
        #[arg(long, default_value_t = 10_000)]
        support_samples: usize,
    },
    /// Search for a red/green coloring of a ray set.
    KsColor {
        path: PathBuf,
        /// Count all valid colorings.
        #[arg(long)]
        enumerate: bool,
        /// Stop enumeration after this many colorings.
        #[arg(long)]
        limit: Option<usize>,
        /// Write the coloring found, if any, as JSON.
        #[arg(long)]
        coloring_out: Option<PathBuf>,
        /// Orthogonality tolerance, in (0, 0.1].
        #[arg(long, default_value_t = ontic_core::coloring::DEFAULT_TOL)]
        tolerance: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub samples: usize,
    pub format: Format,
    pub epsilon: f64,
    pub model: Option<ModelKind>,
}

impl RunConfig {
    pub fn new(seed: u64, samples: usize, format: Format, epsilon: f64, model: Option<ModelKind>) -> Result<Self, CliError> {
        if samples < 1000 {
            return Err(CliError::Usage(format!("--samples must be at least 1000, got {samples}")));
        }
        if !(epsilon > 0.0 && epsilon <= 1e-3) {
            return Err(CliError::Usage(format!("--epsilon must lie in (0, 1e-3], got {epsilon}")));
        }
        Ok(Self {
            seed,
            samples,
            format,
            epsilon,
            model,
        })
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            samples: 1_000_000,
            format: Format::Json,
            epsilon: 1e-9,
            model: None,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<Vec<ReportRecord>, CliError> {
    let cfg = RunConfig::new(cli.seed, cli.samples, cli.format, cli.epsilon, cli.model)?;
    match &cli.command {
        Command::Verify { model, pairs } => commands::verify(&cfg, *model, *pairs),
        Command::Analyze { check, support_samples } => {
            if *support_samples == 0 {
                return Err(CliError::Usage("--support-samples must be positive".into()));
            }
            commands::analyze(&cfg, *check, *support_samples)
        }
        Command::KsColor {
            path,
            enumerate,
            limit,
            coloring_out,
            tolerance,
        } => commands::ks_color(&ColorOptions {
            path,
            tolerance: *tolerance,
            enumerate: *enumerate,
            limit: *limit,
            coloring_out: coloring_out.as_deref(),
        }),
    }
}

/// Parse, run and print. Returns the process exit code: 0 when every record
/// passes, 1 when any record fails, 2 on usage or input errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let records = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = report::write_records(out, cli.format, &records) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    exit_code(&records)
}

pub fn exit_code(records: &[ReportRecord]) -> i32 {
    if records.iter().any(|r| r.verdict == Verdict::Fail) {
        EXIT_FAILED
    } else {
        EXIT_OK
    }
}
