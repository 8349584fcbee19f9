//! `transdirac`: batch front end for the torus and sphere models.
//!
//! Exit status: 0 when every requested check passes, 1 when a check fails
//! (the report lists the failures), 2 for usage or configuration errors.
//! `TRANSDIRAC_THREADS` overrides the worker count.

mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use transdirac::index::{Method, NumericSettings, DEFAULT_EPSILON, DEFAULT_STEPS};
use transdirac::parallel::Execution;
use transdirac::torus::TorusGeometry;

use commands::TorusOp;
use output::{to_json_string, write_csv, write_json, SCHEMA_VERSION};
use verify::{Suite, VerifyConfig};

const THREADS_ENV: &str = "TRANSDIRAC_THREADS";

#[derive(Parser)]
#[command(
    name = "transdirac",
    version,
    about = "Transverse Dirac operators: torus spectra, sphere index tables, verification suites"
)]
struct Cli {
    /// Output file (stdout when omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Multiplies every pass/fail tolerance (values below 1 tighten them).
    #[arg(long, global = true, default_value_t = 1.0)]
    tol_scale: f64,
    /// Run sweeps on the calling thread only.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OpArg {
    #[value(name = "DL", alias = "dl")]
    Dl,
    #[value(name = "DQ", alias = "dq")]
    Dq,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Closed,
    Numeric,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues of D_L or D_Q on one x-mode of the warped torus.
    TorusSpectrum {
        #[arg(long, value_enum)]
        op: OpArg,
        /// Warping shorthand, e.g. `0.3sin,0.1cos2,0.5`.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "g_coeffs")]
        g: Option<String>,
        /// Explicit coefficients `c0,a1,b1,a2,b2,...`.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        g_coeffs: Option<Vec<f64>>,
        #[arg(long = "N", default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        mode: i64,
    },
    /// Kernel dimensions and index per (n, m) block on the sphere.
    SphereIndex {
        #[arg(long, allow_negative_numbers = true, default_value_t = -5)]
        n_min: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 5)]
        n_max: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = -6)]
        m_min: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 6)]
        m_max: i64,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_STEPS)]
        steps: usize,
    },
    /// Closed-form kernel sections of one block with residual diagnostics.
    SphereKernel {
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
    },
    /// Radial coefficients via the frame bundle and via the quotient.
    CompareQuotient {
        #[arg(long, allow_negative_numbers = true, default_value_t = -4)]
        n_min: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 4)]
        n_max: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = -4)]
        m_min: i64,
        #[arg(long, allow_negative_numbers = true, default_value_t = 4)]
        m_max: i64,
        #[arg(long, default_value_t = 32)]
        samples: usize,
    },
    /// Fixed-seed verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
}

#[derive(Serialize)]
struct VerifyRow<'a> {
    suite: &'a str,
    name: &'a str,
    value: f64,
    limit: f64,
    passed: bool,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema_version: u32,
    command: &'a str,
    error: String,
    failures: Vec<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(failures) if failures.is_empty() => ExitCode::SUCCESS,
        Ok(failures) => {
            report_failures(&failures);
            ExitCode::from(1)
        }
        Err(e) => {
            if let Some(te) = e.downcast_ref::<transdirac::Error>() {
                if matches!(te, transdirac::Error::NonIntegerExponent { .. }) {
                    let report = ErrorReport {
                        schema_version: SCHEMA_VERSION,
                        command: command_name(&cli.command),
                        error: te.to_string(),
                        failures: vec![te.to_string()],
                    };
                    if let Ok(text) = to_json_string(&report) {
                        eprint!("{text}");
                    }
                    return ExitCode::from(1);
                }
            }
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn report_failures(failures: &[String]) {
    let compact = serde_json::json!({ "schema_version": SCHEMA_VERSION, "failures": failures });
    eprintln!("{compact}");
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::TorusSpectrum { .. } => "torus-spectrum",
        Command::SphereIndex { .. } => "sphere-index",
        Command::SphereKernel { .. } => "sphere-kernel",
        Command::CompareQuotient { .. } => "compare-quotient",
        Command::Verify { .. } => "verify",
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got '{raw}'"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn ordered(name: &str, lo: i64, hi: i64) -> Result<[i64; 2]> {
    if lo > hi {
        bail!("empty {name} range: {lo} > {hi}");
    }
    Ok([lo, hi])
}

fn run(cli: &Cli) -> Result<Vec<String>> {
    configure_threads()?;
    if !(cli.tol_scale >= 0.0 && cli.tol_scale.is_finite()) {
        bail!("--tol-scale must be finite and non-negative");
    }
    let exec = if cli.sequential { Execution::Sequential } else { Execution::Parallel };
    let out = cli.out.as_deref();
    let csv = cli.format == Format::Csv;
    match &cli.command {
        Command::TorusSpectrum { op, g, g_coeffs, n, mode } => {
            let geom = match (g, g_coeffs) {
                (Some(s), _) => s.parse::<TorusGeometry>()?,
                (None, Some(c)) => TorusGeometry::from_coefficients(c)?,
                (None, None) => TorusGeometry::flat(),
            };
            let op = match op {
                OpArg::Dl => TorusOp::Dl,
                OpArg::Dq => TorusOp::Dq,
            };
            let report = commands::torus_spectrum(&geom, op, *mode, *n, cli.tol_scale)?;
            if csv {
                let rows: Vec<_> = report
                    .eigenvalues
                    .iter()
                    .enumerate()
                    .map(|(index, &eigenvalue)| commands::EigenRow { index, eigenvalue })
                    .collect();
                write_csv(&rows, out)?;
            } else {
                write_json(&report, out)?;
            }
            Ok(report.failures)
        }
        Command::SphereIndex { n_min, n_max, m_min, m_max, method, epsilon, steps } => {
            let method = match method {
                MethodArg::Closed => Method::Closed,
                MethodArg::Numeric => Method::Numeric,
                MethodArg::Both => Method::Both,
            };
            let settings = NumericSettings { epsilon: *epsilon, steps: *steps };
            let report = commands::sphere_index(
                ordered("n", *n_min, *n_max)?,
                ordered("m", *m_min, *m_max)?,
                method,
                settings,
                exec,
            )?;
            if csv {
                write_csv(&report.csv_rows(), out)?;
            } else {
                write_json(&report, out)?;
            }
            Ok(report.failures)
        }
        Command::SphereKernel { n, m } => {
            let report = commands::sphere_kernel(*n, *m, cli.tol_scale)?;
            if csv {
                write_csv(&report.components, out)?;
            } else {
                write_json(&report, out)?;
            }
            Ok(report.failures)
        }
        Command::CompareQuotient { n_min, n_max, m_min, m_max, samples } => {
            if *samples < 2 {
                bail!("--samples must be at least 2");
            }
            let report = commands::compare_quotient(
                ordered("n", *n_min, *n_max)?,
                ordered("m", *m_min, *m_max)?,
                *samples,
                cli.tol_scale,
                exec,
            )?;
            if csv {
                write_csv(&report.blocks, out)?;
            } else {
                write_json(&report, out)?;
            }
            Ok(report.failures)
        }
        Command::Verify { suite, trials, seed } => {
            if *trials == 0 {
                bail!("--trials must be positive");
            }
            let cfg = VerifyConfig { trials: *trials, seed: *seed, tol_scale: cli.tol_scale, exec };
            let report = verify::run(*suite, cfg)?;
            if csv {
                let rows: Vec<VerifyRow> = report
                    .suites
                    .iter()
                    .flat_map(|s| {
                        s.checks.iter().map(move |c| VerifyRow {
                            suite: s.suite,
                            name: &c.name,
                            value: c.value,
                            limit: c.limit,
                            passed: c.passed,
                        })
                    })
                    .collect();
                write_csv(&rows, out)?;
            } else {
                write_json(&report, out)?;
            }
            Ok(report.failures)
        }
    }
}
