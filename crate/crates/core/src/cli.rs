//! Command-line surface of the `surfgrow` binary.
//!
//! Failures print one line `error: kind=<Kind> message=<text>` to stderr.
//! Usage errors exit with 2, scenario and tolerance failures with 1.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::Error;
use crate::io::{parse_config, write_fields};
use crate::scenarios::{convergence_study, doubling, run, verify, Bound, RunOptions, ScenarioKind, VerifyReport};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "SURFGROW_OUT";
const DEFAULT_OUT: &str = "surfgrow-out";
const RUN_PATHLINES: usize = 20;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "surfgrow",
    version,
    about = "Eulerian surface growth of incompressible neo-Hookean solids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the scenario described by a configuration file.
    Run {
        config: PathBuf,
        /// Output directory (default: $SURFGROW_OUT, then ./surfgrow-out).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in checks of a scenario (or `all`).
    Verify {
        scenario: String,
        /// Also write the run artifacts, one subdirectory per scenario.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Refinement study doubling the configured resolution.
    Converge {
        config: PathBuf,
        #[arg(long)]
        levels: usize,
    },
}

enum Failure {
    Usage(String),
    Scenario(Error),
    Tolerance(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Scenario(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Scenario(Error::Io(e))
    }
}

fn default_out() -> PathBuf {
    std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from(DEFAULT_OUT), PathBuf::from)
}

/// Parse `args` (including the program name), execute, and return the exit
/// code. Normal output goes to `out`, error lines to `err`.
pub fn cli_main<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            let _ = writeln!(err, "error: kind=UsageError message={first}");
            let _ = write!(err, "{}", e.render());
            return EXIT_USAGE;
        }
    };
    let outcome = match cli.command {
        Command::Run { config, out: dir } => cmd_run(&config, dir.unwrap_or_else(default_out), out),
        Command::Verify { scenario, out: dir } => cmd_verify(&scenario, dir.as_deref(), out),
        Command::Converge { config, levels } => cmd_converge(&config, levels, out),
    };
    match outcome {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(message)) => {
            let _ = writeln!(err, "error: kind=UsageError message={message}");
            EXIT_USAGE
        }
        Err(Failure::Scenario(e)) => {
            let _ = writeln!(err, "error: kind={} message={e}", e.kind());
            EXIT_FAILURE
        }
        Err(Failure::Tolerance(message)) => {
            let _ = writeln!(err, "error: kind=ToleranceViolation message={message}");
            EXIT_FAILURE
        }
    }
}

fn cmd_run(config: &Path, dir: PathBuf, out: &mut dyn Write) -> Result<(), Failure> {
    let config = parse_config(config)?;
    let result = run(
        &config,
        RunOptions {
            record_history: false,
            pathlines: RUN_PATHLINES,
        },
    )?;
    let manifest = write_fields(&result, &dir)?;
    writeln!(
        out,
        "scenario={} n_cells={} steps={} t_end={} height={:.12e} files={} out={}",
        config.kind,
        config.n_cells,
        result.steps,
        config.t_end,
        result.final_state.grid.height(),
        manifest.files.len() + 1,
        dir.display()
    )?;
    if let Some(e) = result.final_errors() {
        writeln!(
            out,
            "final error (max): Fe12={:.3e} v1={:.3e} p={:.3e} stress={:.3e}",
            e.f_e12.linf, e.v1.linf, e.pressure.linf, e.stress.linf
        )?;
    }
    Ok(())
}

fn print_report(report: &VerifyReport, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "== verify {} ({} steps)", report.scenario, report.result.steps)?;
    writeln!(out, "{:<34} {:>12}   {:<14} status", "check", "value", "tolerance")?;
    for c in &report.checks {
        let bound = match c.bound {
            Bound::AtMost => "<=",
            Bound::AtLeast => ">=",
        };
        let status = if c.passed() { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{:<34} {:>12.3e}   {bound} {:<11.1e} {status}",
            c.name, c.value, c.limit
        )?;
    }
    Ok(())
}

fn cmd_verify(scenario: &str, dir: Option<&Path>, out: &mut dyn Write) -> Result<(), Failure> {
    let kinds: Vec<ScenarioKind> = if scenario == "all" {
        ScenarioKind::ALL.to_vec()
    } else {
        match ScenarioKind::from_name(scenario) {
            Some(k) => vec![k],
            None => {
                let names: Vec<_> = ScenarioKind::ALL.iter().map(|k| k.name()).collect();
                return Err(Failure::Usage(format!(
                    "unknown scenario `{scenario}`; expected one of {} or all",
                    names.join(", ")
                )));
            }
        }
    };
    let mut failed = Vec::new();
    for kind in kinds {
        let report = verify(kind)?;
        print_report(&report, out)?;
        if let Some(dir) = dir {
            write_fields(&report.result, dir.join(kind.name()))?;
        }
        failed.extend(
            report
                .checks
                .iter()
                .filter(|c| !c.passed())
                .map(|c| format!("{kind}: {}", c.name)),
        );
    }
    if failed.is_empty() {
        writeln!(out, "all checks passed")?;
        Ok(())
    } else {
        Err(Failure::Tolerance(failed.join("; ")))
    }
}

fn cmd_converge(config: &Path, levels: usize, out: &mut dyn Write) -> Result<(), Failure> {
    if levels < 2 {
        return Err(Failure::Usage("--levels must be at least 2".into()));
    }
    let config = parse_config(config)?;
    let table = convergence_study(&config, &doubling(config.n_cells, levels))?;
    writeln!(out, "== converge {} ({} levels)", table.scenario, table.rows.len())?;
    writeln!(
        out,
        "{:>8} {:>8} {:>9} {:>12} {:>12} {:>12} {:>7}",
        "n_cells", "steps", "seconds", "err_Fe12", "err_v1", "err_p", "order"
    )?;
    for r in &table.rows {
        let order = r.order.map_or_else(|| "-".to_string(), |o| format!("{o:.3}"));
        writeln!(
            out,
            "{:>8} {:>8} {:>9.3} {:>12.4e} {:>12.4e} {:>12.4e} {:>7}",
            r.n_cells,
            r.steps,
            r.seconds,
            r.final_errors.f_e12.linf,
            r.final_errors.v1.linf,
            r.final_errors.pressure.linf,
            order
        )?;
    }
    let min = table.min_order().map_or_else(|| "-".to_string(), |o| format!("{o:.3}"));
    writeln!(out, "observed order (min) = {min}, monotone = {}", table.is_monotone())?;
    Ok(())
}
