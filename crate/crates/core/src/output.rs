//! CSV writers and the config echo.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::solver::RunReport;

/// Formats with `digits` significant digits in scientific notation.
pub fn fmt_float(x: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), x)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn solution_csv(report: &RunReport) -> String {
    let d = report.config.precision;
    let s = &report.final_state;
    let mut out = String::from("x");
    for c in 0..s.components {
        let _ = write!(out, ",u{c}");
    }
    let with_ref = report.problem.has_reference() && report.breakdown.is_none();
    if with_ref {
        out.push_str(",reference");
    }
    out.push('\n');
    for i in 0..s.elements {
        for (k, &xi) in report.element.nodes.iter().enumerate() {
            let x = report.mesh.map_point(i, xi);
            out.push_str(&fmt_float(x, d));
            for c in 0..s.components {
                out.push(',');
                out.push_str(&fmt_float(s.element(c, i)[k], d));
            }
            if with_ref {
                out.push(',');
                if let Some(Ok(r)) = report.problem.reference(x, s.time) {
                    out.push_str(&fmt_float(r, d));
                }
            }
            out.push('\n');
        }
    }
    out
}

pub const ERRORS_HEADER: &str = "p,I,mode,m_norm,one_norm,inf_norm,breakdown\n";

/// One errors.csv data row; norms are blank when no error report exists.
pub fn errors_row(report: &RunReport) -> String {
    let d = report.config.precision;
    let c = &report.config;
    let norms = match &report.errors {
        Some(e) => format!(
            "{},{},{}",
            fmt_float(e.m_norm, d),
            fmt_float(e.one_norm, d),
            fmt_float(e.inf_norm, d)
        ),
        None => ",,".to_string(),
    };
    format!(
        "{},{},{},{},{}\n",
        c.p,
        c.elements,
        c.mode.name(),
        norms,
        report.broke_down()
    )
}

pub fn diagnostics_csv(report: &RunReport) -> String {
    let d = report.config.precision;
    let mut out = String::from("step,time,dt");
    for c in 0..report.final_state.components {
        let _ = write!(out, ",mass_{c}");
    }
    out.push_str(",energy,troubled_count\n");
    for row in &report.diagnostics {
        let _ = write!(
            out,
            "{},{},{}",
            row.step,
            fmt_float(row.time, d),
            fmt_float(row.dt, d)
        );
        for m in &row.mass {
            out.push(',');
            out.push_str(&fmt_float(*m, d));
        }
        let _ = writeln!(out, ",{},{}", fmt_float(row.energy, d), row.troubled_count);
    }
    out
}

pub fn sensor_csv(report: &RunReport) -> String {
    let d = report.config.precision;
    let mut out = String::from("step,element,variable,s1,s3,ratio,lambda\n");
    for row in &report.sensor_log {
        let r = &row.reading;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.step,
            row.element,
            row.variable,
            fmt_float(r.s1, d),
            fmt_float(r.s3, d),
            fmt_float(r.ratio, d),
            fmt_float(r.lambda, d)
        );
    }
    out
}

/// Writes solution.csv, errors.csv, diagnostics.csv, sensor.csv and config.json.
pub fn write_outputs(report: &RunReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_file(&dir.join("solution.csv"), &solution_csv(report))?;
    write_file(
        &dir.join("errors.csv"),
        &format!("{ERRORS_HEADER}{}", errors_row(report)),
    )?;
    write_file(&dir.join("diagnostics.csv"), &diagnostics_csv(report))?;
    write_file(&dir.join("sensor.csv"), &sensor_csv(report))?;
    write_config_echo(&report.config, dir)
}

pub fn write_config_echo(config: &crate::config::RunConfig, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut text = serde_json::to_string_pretty(config)
        .map_err(|e| Error::Config(format!("cannot serialize config: {e}")))?;
    text.push('\n');
    write_file(&dir.join("config.json"), &text)
}
