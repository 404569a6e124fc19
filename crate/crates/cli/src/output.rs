use std::str::FromStr;

use anyhow::{bail, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Digits used for the analytic table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Decimals(usize),
    /// Twelve significant digits.
    Full,
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Decimals(2)
    }
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "full" {
            return Ok(Precision::Full);
        }
        s.parse::<usize>()
            .map(Precision::Decimals)
            .map_err(|_| format!("precision must be 'full' or a number of decimals, got '{s}'"))
    }
}

impl Precision {
    pub fn format(self, x: f64) -> String {
        match self {
            Precision::Decimals(k) => format!("{x:.k$}"),
            Precision::Full => {
                const SIG: i32 = 12;
                let mag = if x == 0.0 {
                    0
                } else {
                    x.abs().log10().floor() as i32
                };
                let decimals = (SIG - 1 - mag).max(0) as usize;
                format!("{x:.decimals$}")
            }
        }
    }
}

/// Serializes `rows` as CSV with a header line, or as a JSON array.
pub fn render<T: Serialize>(rows: &[T], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in rows {
                w.serialize(row)?;
            }
            Ok(String::from_utf8(w.into_inner()?)?)
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(rows)?;
            s.push('\n');
            Ok(s)
        }
    }
}

/// CSV from pre-formatted cells, used where the column set is data-driven.
pub fn render_table(header: &[String], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        if r.len() != header.len() {
            bail!("row has {} cells, header has {}", r.len(), header.len());
        }
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
