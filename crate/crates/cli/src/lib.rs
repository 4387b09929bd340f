//! Command-line front end for `schwinger-core`.
//!
//! Every subcommand builds a [`RunReport`]: the parameters it ran with, its
//! results, and a list of named checks. The process exit code is 0 when all
//! checks pass, 1 when any fails, and 2 for usage errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
pub mod ensemble;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use ensemble::{parse_ensemble, parse_ensemble_file, EnsembleParseError};
pub use report::{emit_report, g17, OutputFormat, RunReport, Table};

#[derive(Debug, Parser)]
#[command(
    name = "schwinger",
    version,
    about = "Oscillator algebra, Schwinger maps and oscillator thermodynamics"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Reduced Planck constant.
    #[arg(long, global = true, default_value_t = 1.0)]
    pub hbar: f64,
    /// Boltzmann constant.
    #[arg(long = "kB", global = true, default_value_t = 1.0)]
    pub kb: f64,
    /// Boson level count (per-command default when omitted).
    #[arg(long, global = true)]
    pub cutoff: Option<usize>,
    /// Replaces the tolerance of every numeric check.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub output: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Bb,
    Ff,
    BfNaive,
    BfCorrected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyKind {
    Bb,
    Ff,
    BfNaive,
    BfCorrected,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum JzFormArg {
    Projected,
    Diagonal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Subspace {
    /// Boson levels away from the cutoff.
    Safe,
    /// Safe levels without `|0,0⟩`.
    NoVacuum,
    /// The whole truncated space.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Fermion,
    Boson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LadderOp {
    Lower,
    Raise,
    Number,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the su(2) algebra and Casimir identities of a Schwinger map.
    Verify {
        #[arg(long, value_enum)]
        kind: VerifyKind,
        #[arg(long, value_enum)]
        jz_form: Option<JzFormArg>,
    },
    /// Spectrum of the Casimir operator on a subspace.
    Casimir {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, value_enum)]
        jz_form: Option<JzFormArg>,
        #[arg(long, value_enum, default_value_t = Subspace::Safe)]
        subspace: Subspace,
    },
    /// Build |j,m⟩ from two boson modes.
    State {
        /// Half-integer, e.g. `1/2` or `1.5`.
        #[arg(long)]
        j: String,
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Closed-form against traced partition functions over a β sweep.
    Partition(ThermalArgs),
    /// Thermal energy against a finite-difference oracle, or the continuum
    /// energy integral when `--eps-max` is given.
    Energy {
        #[command(flatten)]
        thermal: ThermalArgs,
        #[arg(long)]
        eps_max: Option<f64>,
        #[arg(long, default_value_t = schwinger_core::thermo::DEFAULT_EPS_MIN)]
        eps_min: f64,
        /// Temperature for the continuum integral (`kT = kB·T`).
        #[arg(long, default_value_t = 1.0)]
        temperature: f64,
    },
    /// Rigid rotor equivalent to a set of ground-state oscillators.
    Rotor {
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value = "1")]
        j: String,
        #[arg(long, default_value_t = 2)]
        oscillators: usize,
        /// Also evaluate the rotational partition function and the
        /// fermion-pair inertia at this β.
        #[arg(long)]
        beta: Option<f64>,
        /// Highest j in the rotational partition sum (defaults to `--j`).
        #[arg(long)]
        j_max: Option<String>,
    },
    /// Lagrangian-to-Hamiltonian derivation for the Grassmann oscillator,
    /// or derivatives of an arbitrary expression with `--expr`.
    GrassmannDerive {
        /// Comma-separated names: the field pair, or the generator list when
        /// `--expr` is given.
        #[arg(long)]
        names: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        expr: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
    },
    /// Check `a N^r = (1+N)^r a` and its adjoint on the safe levels.
    ShiftCheck {
        /// Comma-separated exponents.
        #[arg(long, default_value = "-0.5,0,0.5,1,2", allow_hyphen_values = true)]
        r: String,
    },
    /// Heisenberg-picture frequencies of a ladder operator.
    Frequencies {
        #[arg(long, value_enum, default_value_t = ModeArg::Fermion)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, value_enum, default_value_t = LadderOp::Lower)]
        op: LadderOp,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ThermalArgs {
    /// Mode list file; overrides `--mode`/`--omega`.
    #[arg(long)]
    pub ensemble: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = ModeArg::Fermion)]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Comma-separated inverse temperatures.
    #[arg(long, default_value = "0.1,0.5,1,2,5")]
    pub beta: String,
    /// Finite-difference step in β.
    #[arg(long, default_value_t = schwinger_core::thermo::DEFAULT_FD_STEP)]
    pub delta: f64,
}

/// A run that could not produce a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    /// Help and version text go to standard output.
    pub informational: bool,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
            informational: false,
        }
    }
}

impl From<schwinger_core::Error> for CliError {
    fn from(e: schwinger_core::Error) -> Self {
        CliError::usage(format!("error: {e}"))
    }
}

impl From<clap::Error> for CliError {
    fn from(e: clap::Error) -> Self {
        let informational = !e.use_stderr();
        Self {
            code: e.exit_code(),
            message: e.render().to_string(),
            informational,
        }
    }
}

#[derive(Debug)]
pub struct Invocation {
    pub report: RunReport,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> Result<Invocation, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let g = &cli.global;
    if !(g.hbar > 0.0) || !g.hbar.is_finite() {
        return Err(CliError::usage(format!(
            "error: --hbar must be positive, got {}",
            g.hbar
        )));
    }
    if !(g.kb > 0.0) || !g.kb.is_finite() {
        return Err(CliError::usage(format!(
            "error: --kB must be positive, got {}",
            g.kb
        )));
    }
    if let Some(t) = g.tol {
        if !(t >= 0.0) {
            return Err(CliError::usage(format!(
                "error: --tol must be non-negative, got {t}"
            )));
        }
    }
    let mut report = commands::dispatch(&cli)?;
    if let Some(t) = g.tol {
        for c in report.checks.iter_mut().filter(|c| c.tolerance > 0.0) {
            c.tolerance = t;
            c.passed = c.max_error <= t;
        }
        report.settle();
    }
    let format = match g.output {
        Format::Json => OutputFormat::Json,
        Format::Csv => {
            if report.table.is_none() {
                return Err(CliError::usage(format!(
                    "error: csv output is only available for sweep commands, not {}",
                    report.command
                )));
            }
            OutputFormat::Csv
        }
    };
    Ok(Invocation {
        report,
        format,
        out: g.out.clone(),
    })
}

/// Full process behavior: run, emit, and return the exit code.
pub fn main_with<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run(argv) {
        Ok(mut inv) => {
            if let Err(e) = emit_report(&mut inv.report, inv.format, inv.out.as_deref(), stdout) {
                let _ = writeln!(stderr, "error: cannot write report: {e}");
                return 1;
            }
            inv.report.exit_code
        }
        Err(e) => {
            let sink: &mut dyn Write = if e.informational { stdout } else { stderr };
            let _ = write!(sink, "{}", e.message);
            if !e.message.ends_with('\n') {
                let _ = writeln!(sink);
            }
            if e.code == 2 && !e.message.contains("Usage:") {
                let _ = writeln!(
                    stderr,
                    "\nUsage: schwinger [OPTIONS] <COMMAND>\n\nFor more information, try '--help'."
                );
            }
            e.code
        }
    }
}
