//! CSV assembly and float formatting.
//!
//! All floats are printed with 17 significant digits (`{:.16e}`), enough
//! to round-trip every f64 exactly, so a report is byte-identical across
//! runs whenever the computed values are. Fields never contain commas or
//! quotes, so no escaping layer is needed.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};

/// 17 significant digits; round-trips f64 exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn verdict_str(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// A CSV document under construction; one header row, then data rows.
pub struct CsvDoc {
    text: String,
    columns: usize,
}

impl CsvDoc {
    pub fn new(header: &[&str]) -> CsvDoc {
        CsvDoc {
            text: format!("{}\n", header.join(",")),
            columns: header.len(),
        }
    }

    pub fn row(&mut self, fields: &[String]) {
        assert_eq!(fields.len(), self.columns, "ragged CSV row");
        self.text.push_str(&fields.join(","));
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

/// Writes the report to `out` when given, stdout otherwise.
pub fn write_out(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write output {}", path.display())),
        None => {
            io::stdout()
                .write_all(text.as_bytes())
                .context("cannot write to stdout")
        }
    }
}
