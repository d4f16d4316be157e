//! CSV tables with a `#` metadata block, JSON reports, and their sinks.

use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Conventions in effect, recorded in every output so that results can be
/// compared against the uncorrected formulas.
pub fn errata() -> Vec<(&'static str, &'static str)> {
    vec![
        ("bessel_index", "2*gamma-1 (printed: 1/2-gamma)"),
        ("omega0", "1/(2*gamma*(gamma-1))"),
        ("sqrt2", "included in c_n and in the coherent-state closed form"),
        ("hyper_argument", "-z"),
    ]
}

pub fn metadata(cfg: &RunConfig, command: &str) -> Vec<(String, String)> {
    let mut meta = vec![
        ("tool".to_string(), format!("idxf {VERSION}")),
        ("command".to_string(), command.to_string()),
        ("gamma".to_string(), format!("{}", cfg.gamma.gamma)),
        ("mode".to_string(), cfg.mode_name().to_string()),
        ("convention".to_string(), cfg.convention.name().to_string()),
    ];
    meta.extend(errata().into_iter().map(|(k, v)| (k.to_string(), v.to_string())));
    meta
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(usize),
    Num(f64),
}

#[derive(Debug, Clone)]
pub struct Table {
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(meta: Vec<(String, String)>, columns: Vec<&'static str>) -> Self {
        Self { meta, columns, rows: Vec::new() }
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k}: {v}");
        }
        let _ = writeln!(s, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Int(n) => n.to_string(),
                    Cell::Num(v) => format!("{v:.17e}"),
                })
                .collect();
            let _ = writeln!(s, "{}", cells.join(","));
        }
        s
    }
}

pub fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(format!("serialization: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, payload: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, payload)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(payload.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
