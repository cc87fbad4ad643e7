//! Output shaping: the one CSV schema every subcommand shares, plus JSON
//! and file/stdout plumbing.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::PathBuf;

use clap::ValueEnum;

use crate::error::CliError;

/// Wire format of a data-emitting subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `case_id,M,metric,value,stderr` rows.
    Csv,
    /// A single pretty-printed JSON document.
    Json,
}

/// Destination and format of a subcommand's data output.
#[derive(Debug, clap::Args)]
pub struct OutputOpts {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write the output to a file instead of stdout
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

/// One CSV record. Every tabular output of the tool uses the same five
/// columns; `stderr` is empty for deterministic (closed-form) rows.
#[derive(Debug, Clone)]
pub struct Row {
    pub case_id: String,
    pub m: usize,
    pub metric: String,
    pub value: f64,
    pub stderr: Option<f64>,
}

impl Row {
    pub fn new(case_id: &str, m: usize, metric: &str, value: f64, stderr: Option<f64>) -> Self {
        Self {
            case_id: case_id.to_owned(),
            m,
            metric: metric.to_owned(),
            value,
            stderr,
        }
    }
}

/// Quotes a CSV field only when it needs quoting.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Shortest `f64` representation that round-trips exactly.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

pub const CSV_HEADER: &str = "case_id,M,metric,value,stderr";

pub fn rows_to_csv(rows: &[Row]) -> String {
    let mut s = String::with_capacity(64 * (rows.len() + 1));
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            csv_field(&r.case_id),
            r.m,
            csv_field(&r.metric),
            fmt_f64(r.value),
            r.stderr.map(fmt_f64).unwrap_or_default()
        );
    }
    s
}

/// Renders rows or the JSON document per the options and delivers the text.
pub fn write_output(
    opts: &OutputOpts,
    rows: &[Row],
    json: &serde_json::Value,
) -> Result<(), CliError> {
    let text = match opts.format {
        Format::Csv => rows_to_csv(rows),
        Format::Json => render_json(json)?,
    };
    match &opts.out {
        Some(path) => fs::write(path, text)?,
        None => {
            // A closed stdout (e.g. `mimo-lab ... | head`) is not a crash.
            let _ = std::io::stdout().write_all(text.as_bytes());
        }
    }
    Ok(())
}

pub fn render_json(json: &serde_json::Value) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(json)? + "\n")
}
