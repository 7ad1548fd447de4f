//! CSV and JSON emission with embedded run metadata.
//!
//! CSV artifacts carry `#`-prefixed metadata lines (schema version, command,
//! timestamp, resolved config) before the header row. JSON artifacts are a
//! single object with `meta` and `data` members. Apart from the timestamp,
//! identical configs produce byte-identical artifacts.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize)]
pub struct Meta {
    pub schema_version: u32,
    pub command: String,
    pub generated_unix: u64,
    pub config: BTreeMap<String, String>,
}

impl Meta {
    pub fn new(command: &str, config: BTreeMap<String, String>) -> Meta {
        Meta {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            generated_unix: std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            config,
        }
    }
}

fn open_sink(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => Ok(Box::new(std::fs::File::create(p).map_err(CliError::Io)?)),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

pub fn write_csv(
    path: Option<&Path>,
    meta: &Meta,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<(), CliError> {
    let mut w = open_sink(path)?;
    let io = CliError::Io;
    writeln!(w, "# schema_version = {}", meta.schema_version).map_err(io)?;
    writeln!(w, "# command = {}", meta.command).map_err(CliError::Io)?;
    writeln!(w, "# generated_unix = {}", meta.generated_unix).map_err(CliError::Io)?;
    for (k, v) in &meta.config {
        writeln!(w, "# config.{k} = {v}").map_err(CliError::Io)?;
    }
    writeln!(w, "{}", header.join(",")).map_err(CliError::Io)?;
    for row in rows {
        writeln!(w, "{}", row.join(",")).map_err(CliError::Io)?;
    }
    Ok(())
}

pub fn write_json(
    path: Option<&Path>,
    meta: &Meta,
    data: serde_json::Value,
) -> Result<(), CliError> {
    let mut w = open_sink(path)?;
    let obj = serde_json::json!({ "meta": meta, "data": data });
    serde_json::to_writer_pretty(&mut w, &obj)
        .map_err(|e| CliError::Io(std::io::Error::other(e)))?;
    writeln!(w).map_err(CliError::Io)?;
    Ok(())
}

/// Format an f64 so the artifact re-parses to the identical value.
pub fn fmt_f64(v: f64) -> String {
    let mut buffer = ryu_like(v);
    if !buffer.contains('.') && !buffer.contains('e') && !buffer.contains("inf") && !buffer.contains("NaN")
    {
        buffer.push_str(".0");
    }
    buffer
}

fn ryu_like(v: f64) -> String {
    // {:?} on f64 prints the shortest representation that round-trips
    format!("{v:?}")
}

/// Parse a CSV emitted by this tool: returns (header, numeric rows),
/// skipping metadata lines.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<f64>>), CliError> {
    let mut header = None;
    let mut rows = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if header.is_none() {
            header = Some(line.split(',').map(|s| s.trim().to_string()).collect());
            continue;
        }
        let row = line
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| CliError::Config(format!("bad number in CSV row: `{s}`")))
            })
            .collect::<Result<Vec<f64>, CliError>>()?;
        rows.push(row);
    }
    Ok((header.unwrap_or_default(), rows))
}
