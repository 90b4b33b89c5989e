//! Writers and the bundled reader.
//!
//! CSV: leading `#` lines carry the metadata (`# experiment = ...`,
//! `# version = ...`, `# config <key> = <value>`, `# summary <key> = <json>`),
//! followed by an RFC 4180 header and rows with CRLF line ends. Numbers use
//! the shortest representation that reads back to the same `f64`.
//!
//! JSON: `{"metadata": {...}, "rows": [{column: value, ...}, ...]}`, pretty
//! printed with two-space indentation and a trailing newline.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::error::{CliError, Result};
use crate::table::{Metadata, ResultTable};

/// Output format.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(CliError::Config(format!("unknown format '{s}' (expected csv or json)"))),
        }
    }
}

fn number(v: f64) -> String {
    format!("{v:?}")
}

/// Renders a table as text.
pub fn render(table: &ResultTable, format: Format) -> Result<String> {
    match format {
        Format::Csv => render_csv(table),
        Format::Json => render_json(table),
    }
}

/// Writes a table to `path`.
pub fn write_table(table: &ResultTable, format: Format, path: &Path) -> Result<()> {
    let text = render(table, format)?;
    fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn render_csv(table: &ResultTable) -> Result<String> {
    let m = &table.metadata;
    let mut out = String::new();
    let mut comment = |line: String| {
        if line.contains(['\r', '\n']) {
            return Err(CliError::Config("metadata values cannot contain line breaks".into()));
        }
        out.push_str("# ");
        out.push_str(&line);
        out.push_str("\r\n");
        Ok(())
    };
    comment(format!("experiment = {}", m.experiment))?;
    comment(format!("version = {}", m.version))?;
    for (k, v) in &m.config {
        comment(format!("config {k} = {v}"))?;
    }
    for (k, v) in &m.summary {
        comment(format!("summary {k} = {}", serde_json::to_string(v).expect("json value")))?;
    }
    let io = |e: csv::Error| CliError::Io(format!("csv: {e}"));
    // A header starting with '#' is quoted so it is not read as metadata.
    let style = if table.columns.first().is_some_and(|c| c.starts_with('#')) { csv::QuoteStyle::Always } else { csv::QuoteStyle::Necessary };
    let mut header = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).quote_style(style).from_writer(Vec::new());
    header.write_record(&table.columns).map_err(io)?;
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(header.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?);
    for row in table.rows() {
        w.write_record(row.iter().map(|v| number(*v))).map_err(io)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Io(format!("csv: {e}")))?;
    out.push_str(&String::from_utf8(body).expect("csv output is UTF-8"));
    Ok(out)
}

fn render_json(table: &ResultTable) -> Result<String> {
    let m = &table.metadata;
    let unique: std::collections::BTreeSet<&String> = table.columns.iter().collect();
    if unique.len() != table.columns.len() {
        return Err(CliError::Config("JSON output needs distinct column names".into()));
    }
    let config: Map<String, Value> = m.config.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let rows: Vec<Value> = table
        .rows()
        .iter()
        .map(|r| {
            let obj: Map<String, Value> = table.columns.iter().zip(r).map(|(c, v)| (c.clone(), json!(v))).collect();
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "metadata": {
            "experiment": m.experiment,
            "version": m.version,
            "columns": table.columns,
            "config": config,
            "summary": m.summary,
        },
        "rows": rows,
    });
    let mut s = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Io(format!("json: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Reads a file written by [`write_table`], detecting the format.
pub fn read_table(path: &Path) -> Result<ResultTable> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_table(&text)
}

/// Parses CSV or JSON text produced by [`render`].
pub fn parse_table(text: &str) -> Result<ResultTable> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

fn malformed(what: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("malformed table: {what}"))
}

fn parse_csv(text: &str) -> Result<ResultTable> {
    let mut meta = Metadata { experiment: String::new(), version: String::new(), config: BTreeMap::new(), summary: Map::new() };
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        let Some(c) = line.strip_prefix("# ") else { break };
        body_start += line.len();
        let c = c.trim_end_matches(['\r', '\n']);
        let (lhs, rhs) = c.split_once(" = ").ok_or_else(|| malformed(format!("comment '{c}'")))?;
        match lhs.split_once(' ') {
            None if lhs == "experiment" => meta.experiment = rhs.to_string(),
            None if lhs == "version" => meta.version = rhs.to_string(),
            Some(("config", k)) => {
                meta.config.insert(k.to_string(), rhs.to_string());
            }
            Some(("summary", k)) => {
                let v: Value = serde_json::from_str(rhs).map_err(malformed)?;
                meta.summary.insert(k.to_string(), v);
            }
            _ => return Err(malformed(format!("comment '{c}'"))),
        }
    }
    let mut r = csv::ReaderBuilder::new().has_headers(true).from_reader(&text.as_bytes()[body_start..]);
    let columns: Vec<String> = r.headers().map_err(malformed)?.iter().map(str::to_string).collect();
    let mut table = ResultTable::new(columns, meta);
    for rec in r.records() {
        let rec = rec.map_err(malformed)?;
        let row = rec.iter().map(|f| f.parse::<f64>().map_err(|_| malformed(format!("value '{f}'")))).collect::<Result<Vec<_>>>()?;
        table.push(row).map_err(malformed)?;
    }
    Ok(table)
}

fn parse_json(text: &str) -> Result<ResultTable> {
    let doc: Value = serde_json::from_str(text).map_err(malformed)?;
    let m = doc.get("metadata").and_then(Value::as_object).ok_or_else(|| malformed("missing metadata"))?;
    let text_field = |k: &str| m.get(k).and_then(Value::as_str).map(str::to_string).ok_or_else(|| malformed(format!("metadata.{k}")));
    let columns: Vec<String> = m
        .get("columns")
        .and_then(Value::as_array)
        .ok_or_else(|| malformed("metadata.columns"))?
        .iter()
        .map(|c| c.as_str().map(str::to_string).ok_or_else(|| malformed("column name")))
        .collect::<Result<_>>()?;
    let config = m
        .get("config")
        .and_then(Value::as_object)
        .ok_or_else(|| malformed("metadata.config"))?
        .iter()
        .map(|(k, v)| v.as_str().map(|s| (k.clone(), s.to_string())).ok_or_else(|| malformed(format!("config value {k}"))))
        .collect::<Result<BTreeMap<_, _>>>()?;
    let summary = m.get("summary").and_then(Value::as_object).cloned().ok_or_else(|| malformed("metadata.summary"))?;
    let meta = Metadata { experiment: text_field("experiment")?, version: text_field("version")?, config, summary };
    let mut table = ResultTable::new(columns.clone(), meta);
    for row in doc.get("rows").and_then(Value::as_array).ok_or_else(|| malformed("rows"))? {
        let obj = row.as_object().ok_or_else(|| malformed("row"))?;
        if obj.len() != columns.len() {
            return Err(malformed("row length"));
        }
        let vals = columns
            .iter()
            .map(|c| obj.get(c).and_then(Value::as_f64).ok_or_else(|| malformed(format!("row value {c}"))))
            .collect::<Result<Vec<_>>>()?;
        table.push(vals).map_err(malformed)?;
    }
    Ok(table)
}
