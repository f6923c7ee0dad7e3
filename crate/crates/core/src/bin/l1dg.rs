use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use l1dg::config::{parse_config_with_overrides, RunConfig};
use l1dg::output::{errors_row, write_config_echo, write_outputs, ERRORS_HEADER};
use l1dg::solver::run_simulation;
use l1dg::Error;

/// Nodal DG solver with l1-regularized troubled-element reconstruction.
#[derive(Debug, Parser)]
#[command(name = "l1dg", version)]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `output_dir` in the config.
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// KEY=VALUE with a dotted key, e.g. sensor.kappa=0.9. Repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Print nothing on success.
    #[arg(long)]
    quiet: bool,
}

const EXIT_INTERNAL: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_BREAKDOWN: u8 = 3;

fn run_dir(cfg: &RunConfig, base: &std::path::Path) -> PathBuf {
    base.join(format!("p{}_I{}_{}", cfg.p, cfg.elements, cfg.mode.name()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    ExitCode::SUCCESS
                }
                _ => ExitCode::from(EXIT_CONFIG),
            };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if cli.quiet {
        "error"
    } else {
        "warn"
    }))
    .init();

    let text = match fs::read_to_string(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", cli.config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mut config = match parse_config_with_overrides(&text, &cli.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.config.display());
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Some(dir) = cli.output_dir {
        config.output_dir = dir;
    }

    match execute(&config, cli.quiet) {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(EXIT_BREAKDOWN),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) => ExitCode::from(EXIT_CONFIG),
                _ => ExitCode::from(EXIT_INTERNAL),
            }
        }
    }
}

/// Runs every configuration; returns whether any run broke down.
fn execute(config: &RunConfig, quiet: bool) -> l1dg::Result<bool> {
    let base = &config.output_dir;
    let runs = config.expand();
    let sweep = config.sweep.is_some();
    let mut table = String::from(ERRORS_HEADER);
    let mut any_breakdown = false;
    for cfg in &runs {
        let report = run_simulation(cfg)?;
        let dir = if sweep {
            run_dir(cfg, base)
        } else {
            base.clone()
        };
        write_outputs(&report, &dir)?;
        table.push_str(&errors_row(&report));
        if !quiet {
            let status = match (&report.breakdown, &report.errors) {
                (Some(b), _) => format!("breakdown at t = {:.6} ({})", b.time, b.reason),
                (None, Some(e)) => format!(
                    "m_norm {:.3e}  one_norm {:.3e}  inf_norm {:.3e}",
                    e.m_norm, e.one_norm, e.inf_norm
                ),
                (None, None) => format!("done, {} steps", report.steps),
            };
            println!(
                "{} p={} I={} mode={}: {status}",
                cfg.problem.name(),
                cfg.p,
                cfg.elements,
                cfg.mode.name()
            );
        }
        any_breakdown |= report.broke_down();
    }
    if sweep {
        let path = base.join("errors.csv");
        fs::write(&path, table).map_err(|e| Error::io(&path, e))?;
        write_config_echo(config, base)?;
    }
    Ok(any_breakdown)
}
