//! json and csv writers.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::report::{SampleTable, SuiteReport};
use crate::CliError;

/// Scientific notation with 17 significant digits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn to_json(report: &SuiteReport) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(report).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// One row per case. Leading columns are fixed; each check contributes
/// `<name>.max_abs`, `<name>.tolerance`, `<name>.pass` and each order report
/// `<name>.order`, in order of first appearance.
pub fn to_csv(report: &SuiteReport) -> Result<String, CliError> {
    let mut params: Vec<&String> = Vec::new();
    let mut checks: Vec<&str> = Vec::new();
    let mut orders: Vec<&str> = Vec::new();
    for case in &report.cases {
        for k in case.parameters.keys() {
            if !params.contains(&k) {
                params.push(k);
            }
        }
        for c in &case.checks {
            if !checks.contains(&c.report.name.as_str()) {
                checks.push(&c.report.name);
            }
        }
        for o in &case.orders {
            if !orders.contains(&o.name.as_str()) {
                orders.push(&o.name);
            }
        }
    }
    params.sort();

    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = ["case", "label", "kind", "pass", "grid_points"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend(params.iter().map(|s| s.to_string()));
    for c in &checks {
        header.push(format!("{c}.max_abs"));
        header.push(format!("{c}.tolerance"));
        header.push(format!("{c}.pass"));
    }
    header.extend(orders.iter().map(|o| format!("{o}.order")));
    header.push("error".into());
    w.write_record(&header).map_err(|e| CliError::Output(e.to_string()))?;

    for case in &report.cases {
        let kind = serde_json::to_value(case.kind)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        let grid_points = case
            .checks
            .first()
            .map_or(String::new(), |c| c.report.grid_points.to_string());
        let mut row = vec![
            case.index.to_string(),
            case.label.clone(),
            kind,
            case.pass.to_string(),
            grid_points,
        ];
        for p in &params {
            row.push(case.parameters.get(*p).map_or(String::new(), |v| fmt_f64(*v)));
        }
        for name in &checks {
            match case.check(name) {
                Some(c) => {
                    row.push(fmt_f64(c.report.max_abs));
                    row.push(fmt_f64(c.report.tolerance));
                    row.push(c.report.pass.to_string());
                }
                None => row.extend([String::new(), String::new(), String::new()]),
            }
        }
        for name in &orders {
            row.push(
                case.orders
                    .iter()
                    .find(|o| o.name == *name)
                    .map_or(String::new(), |o| fmt_f64(o.observed_order)),
            );
        }
        row.push(case.error.clone().unwrap_or_default());
        w.write_record(&row).map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

pub fn samples_to_csv(table: &SampleTable) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(table.columns.iter().map(|(name, _)| name.as_str()))
        .map_err(|e| CliError::Output(e.to_string()))?;
    let rows = table.columns.first().map_or(0, |(_, v)| v.len());
    for i in 0..rows {
        w.write_record(table.columns.iter().map(|(_, v)| fmt_f64(v[i])))
            .map_err(|e| CliError::Output(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

/// Writes `text` to `path`, or to stdout when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    let io_err = |e: io::Error, p: &Path| CliError::Io {
        path: p.to_path_buf(),
        message: e.to_string(),
    };
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| io_err(e, p))?;
            let mut w = BufWriter::new(file);
            w.write_all(text.as_bytes()).map_err(|e| io_err(e, p))?;
            w.flush().map_err(|e| io_err(e, p))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| io_err(e, Path::new("<stdout>")))
        }
    }
}
