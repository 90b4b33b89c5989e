//! Experiment runner for `qwalk-core`: configuration handling, the
//! experiment registry and the CSV/JSON result formats with a reader.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod experiments;
pub mod format;
pub mod table;

use std::path::Path;

use config::{Params, RawConfig};
use error::{CliError, Result};
use table::{Metadata, ResultTable};

/// Environment variable holding the worker thread count.
pub const THREADS_VAR: &str = "QWALK_THREADS";

/// A finished run: the table and any failed property checks.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub table: ResultTable,
    pub failures: Vec<String>,
}

/// Resolves the configuration of `name` and runs it.
pub fn run_experiment(name: &str, raw: &RawConfig) -> Result<RunResult> {
    let exp = experiments::find(name).ok_or_else(|| {
        let names: Vec<&str> = experiments::EXPERIMENTS.iter().map(|e| e.name).collect();
        CliError::Config(format!("unknown experiment '{name}' (expected one of {})", names.join(", ")))
    })?;
    let params = Params::resolve(name, &exp.schema(), raw)?;
    let out = (exp.run)(&params)?;
    let meta = Metadata {
        experiment: name.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: params.echo().clone(),
        summary: out.summary,
    };
    let mut table = ResultTable::new(out.columns, meta);
    for row in out.rows {
        table.push(row)?;
    }
    Ok(RunResult { table, failures: out.failures })
}

/// Reads a configuration file and applies `key=value` overrides.
pub fn load_config(path: Option<&Path>, overrides: &[String]) -> Result<RawConfig> {
    let mut raw = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("cannot read {}: {e}", p.display())))?;
            RawConfig::parse(&text)?
        }
        None => RawConfig::default(),
    };
    for o in overrides {
        raw.set(o)?;
    }
    Ok(raw)
}

/// Sizes the global thread pool from the value of [`THREADS_VAR`]. Results do
/// not depend on the thread count.
pub fn configure_threads(value: Option<&str>) -> Result<()> {
    let Some(v) = value else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("{THREADS_VAR} = '{v}': expected a positive integer")))?;
    // A pool that already exists (repeated calls in one process) is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
