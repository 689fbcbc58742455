use std::fmt::Write as _;
use std::str::FromStr;

use super::convergence::ConvergenceReport;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "N,max_error,rate,k,residual,wall_time_s";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "markdown" | "md" => Ok(Self::Markdown),
            other => Err(Error::InvalidArgument(format!(
                "unknown report format {other:?}"
            ))),
        }
    }
}

/// Three significant digits with a signed two-digit exponent, e.g. `3.30E-05`.
pub fn format_sci(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let s = format!("{x:.2E}");
    let (mantissa, exp) = s
        .split_once('E')
        .expect("E formatting always has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

fn opt<T>(v: Option<T>, f: impl Fn(T) -> String) -> String {
    v.map(f).unwrap_or_default()
}

pub fn emit_report(report: &ConvergenceReport, format: ReportFormat) -> String {
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            out.push_str(CSV_HEADER);
            out.push('\n');
            for r in &report.rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{:.6}",
                    r.n,
                    opt(r.max_error, format_sci),
                    opt(r.rate, |v| format!("{v:.3}")),
                    r.k,
                    format_sci(r.residual),
                    r.wall_time_s
                );
            }
        }
        ReportFormat::Markdown => {
            let m = &report.meta;
            let _ = writeln!(
                out,
                "{} ({}, {} / {}), alpha1 = {}, alpha2 = {}, s0 = {}, Tol = {:e}\n",
                m.example, m.pipeline, m.method, m.scheme, m.alpha1, m.alpha2, m.s0, m.tol
            );
            out.push_str("| N | Max. error | Rate | k | \\|F(s_k)\\| | time (s) |\n");
            out.push_str("|---:|---:|---:|---:|---:|---:|\n");
            for r in &report.rows {
                let err = match (&r.max_error, &r.failure) {
                    (Some(e), _) => format_sci(*e),
                    (None, Some(why)) => format!("failed ({why})"),
                    (None, None) => String::new(),
                };
                let _ = writeln!(
                    out,
                    "| {} | {} | {} | {} | {} | {:.3} |",
                    r.n,
                    err,
                    opt(r.rate, |v| format!("{v:.3}")),
                    r.k,
                    format_sci(r.residual),
                    r.wall_time_s
                );
            }
        }
    }
    out
}

/// One data line of an emitted CSV report.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub n: usize,
    pub max_error: Option<f64>,
    pub rate: Option<f64>,
    pub k: usize,
    pub residual: f64,
    pub wall_time_s: f64,
}

/// Parse text produced by [`emit_report`] in CSV form.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some(CSV_HEADER) {
        return Err(Error::InvalidArgument(
            "missing or unexpected CSV header".into(),
        ));
    }
    let bad = |line: &str| Error::InvalidArgument(format!("malformed CSV line {line:?}"));
    let float = |s: &str, line: &str| s.parse::<f64>().map_err(|_| bad(line));
    let optional = |s: &str, line: &str| -> Result<Option<f64>> {
        if s.is_empty() {
            Ok(None)
        } else {
            float(s, line).map(Some)
        }
    };
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 6 {
                return Err(bad(line));
            }
            Ok(CsvRow {
                n: f[0].parse().map_err(|_| bad(line))?,
                max_error: optional(f[1], line)?,
                rate: optional(f[2], line)?,
                k: f[3].parse().map_err(|_| bad(line))?,
                residual: float(f[4], line)?,
                wall_time_s: float(f[5], line)?,
            })
        })
        .collect()
}
