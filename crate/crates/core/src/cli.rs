//! Command-line front end. Exit codes: 0 success, 2 usage, 3 truncation
//! non-convergence, 4 I/O.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{error_summary, method_levels, run_sweep, SweepSpec};
use crate::approx::ApproxMethod;
use crate::error::Error;
use crate::exact::ConvergencePolicy;
use crate::model::ModelParams;
use crate::output::{render, render_summary, render_sweep, spectrum_rows, OutputFormat};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONVERGENCE: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "rabi-spectrum",
    version,
    about = "Quantum Rabi model spectra: exact, RWA, adiabatic and generalized RWA"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest energy levels at one parameter point.
    Spectrum(SpectrumArgs),
    /// Energies over a uniform grid of λ/ω0.
    Sweep(SweepArgs),
    /// Maximum per-level error of each method against a reference.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: f64,
    #[arg(long = "Omega", allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, value_parser = parse_method)]
    pub method: ApproxMethod,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    /// Smallest truncation for the exact method; the schedule is
    /// nmax, 2·nmax, 4·nmax.
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub omega0: f64,
    #[arg(long = "Omega", allow_negative_numbers = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub gmin: f64,
    #[arg(long, default_value_t = 2.0, allow_negative_numbers = true)]
    pub gmax: f64,
    #[arg(long, default_value_t = 201)]
    pub steps: usize,
    #[arg(long, value_delimiter = ',', value_parser = parse_method, default_value = "exact,rwa,adiabatic,grwa")]
    pub methods: Vec<ApproxMethod>,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    pub format: OutputFormat,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[arg(long, value_parser = parse_method, default_value = "exact")]
    pub reference: ApproxMethod,
}

fn parse_method(s: &str) -> Result<ApproxMethod, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn policy(nmax: Option<usize>) -> ConvergencePolicy {
    nmax.map(ConvergencePolicy::doubling_from)
        .unwrap_or_default()
}

impl SweepArgs {
    fn spec(&self, extra: Option<ApproxMethod>) -> SweepSpec {
        let mut methods = self.methods.clone();
        methods.extend(extra);
        SweepSpec {
            omega0: self.omega0,
            omega: self.omega,
            g_min: self.gmin,
            g_max: self.gmax,
            steps: self.steps,
            methods,
            levels: self.levels,
            policy: policy(self.nmax),
        }
    }
}

#[derive(Serialize)]
struct SpectrumEcho {
    #[serde(flatten)]
    params: ModelParams,
    method: ApproxMethod,
    levels: usize,
    policy: Option<ConvergencePolicy>,
}

#[derive(Serialize)]
struct CompareEcho<'a> {
    #[serde(flatten)]
    sweep: &'a SweepSpec,
    reference: ApproxMethod,
}

/// Error surfaced to `main` with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match &e {
            Error::TruncationNoConvergence { report, .. } => {
                let report = serde_json::to_string(report).unwrap_or_default();
                Failure {
                    code: EXIT_CONVERGENCE,
                    message: format!("error: {e}\n{report}"),
                }
            }
            _ => Failure {
                code: EXIT_USAGE,
                message: format!("error: {e}"),
            },
        }
    }
}

fn io_failure(path: Option<&PathBuf>, e: std::io::Error) -> Failure {
    let target = path
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "stdout".into());
    Failure {
        code: EXIT_IO,
        message: format!("error: cannot write {target}: {e}"),
    }
}

fn emit(out: Option<&PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_failure(Some(path), e)),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| io_failure(None, e)),
    }
}

/// Runs a parsed command, writing results to `stdout` (or `--out`).
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Spectrum(a) => {
            let params = ModelParams::new(a.omega0, a.omega, a.lambda)?;
            let policy = policy(a.nmax);
            let levels = method_levels(a.method, &params, a.levels, &policy)?;
            let rows = spectrum_rows(a.method, &levels, params.omega0);
            let echo = SpectrumEcho {
                params,
                method: a.method,
                levels: a.levels,
                policy: (a.method == ApproxMethod::Exact).then_some(policy),
            };
            emit(None, &render(a.format, &echo, &rows), stdout)
        }
        Command::Sweep(a) => {
            let spec = a.spec(None);
            let table = run_sweep(&spec)?;
            emit(
                a.out.as_ref(),
                &render_sweep(a.format, &spec, &table),
                stdout,
            )
        }
        Command::Compare(c) => {
            let a = &c.sweep;
            let spec = a.spec(Some(c.reference));
            let table = run_sweep(&spec)?;
            let mut summary = error_summary(&table, c.reference)?;
            summary.entries.retain(|e| a.methods.contains(&e.method));
            let echo = CompareEcho {
                sweep: &spec,
                reference: c.reference,
            };
            emit(
                a.out.as_ref(),
                &render_summary(a.format, &echo, &summary),
                stdout,
            )
        }
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match run(cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "{}", f.message);
            f.code
        }
    }
}
