//! Experiment configuration. Files are INI-like: `key = value` lines grouped
//! under `[section]` headers, flattened to `section.key`. Overrides use the
//! same flattened names.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};

use ini::Ini;

use crate::error::{CliError, Result};

/// One configuration key of an experiment with its default value.
#[derive(Clone, Copy, Debug)]
pub struct Key {
    pub name: &'static str,
    pub default: &'static str,
    pub help: &'static str,
}

/// Shorthand constructor used by the experiment tables.
pub const fn key(name: &'static str, default: &'static str, help: &'static str) -> Key {
    Key { name, default, help }
}

/// Settings read from a file and command-line overrides, before they are
/// checked against an experiment.
#[derive(Clone, Debug, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, String>,
}

impl RawConfig {
    /// Parses INI text.
    pub fn parse(text: &str) -> Result<Self> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Config(format!("cannot parse config: {e}")))?;
        let mut entries = BTreeMap::new();
        for (section, props) in ini.iter() {
            for (k, v) in props.iter() {
                let name = match section {
                    Some(s) => format!("{}.{}", s.trim(), k.trim()),
                    None => k.trim().to_string(),
                };
                if entries.insert(name.clone(), v.trim().to_string()).is_some() {
                    return Err(CliError::Config(format!("duplicate key '{name}'")));
                }
            }
        }
        Ok(Self { entries })
    }

    /// Applies a `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("override '{assignment}' is not of the form key=value")))?;
        let k = k.trim();
        if k.is_empty() {
            return Err(CliError::Config(format!("override '{assignment}' has an empty key")));
        }
        self.entries.insert(k.to_string(), v.trim().to_string());
        Ok(())
    }

    /// Entries in key order.
    pub fn entries(&self) -> &BTreeMap<String, String> {
        &self.entries
    }
}

/// Fully resolved settings of one experiment.
#[derive(Clone, Debug)]
pub struct Params {
    values: BTreeMap<String, String>,
}

impl Params {
    /// Overlays `raw` on the defaults of `schema`. Keys outside the schema
    /// are rejected.
    pub fn resolve(experiment: &str, schema: &[Key], raw: &RawConfig) -> Result<Self> {
        let mut values: BTreeMap<String, String> = schema.iter().map(|k| (k.name.to_string(), k.default.to_string())).collect();
        for (k, v) in raw.entries() {
            match values.get_mut(k) {
                Some(slot) => *slot = v.clone(),
                None => {
                    let known: Vec<&str> = schema.iter().map(|k| k.name).collect();
                    return Err(CliError::Config(format!(
                        "unknown key '{k}' for experiment '{experiment}' (known: {})",
                        known.join(", ")
                    )));
                }
            }
        }
        Ok(Self { values })
    }

    /// The resolved configuration, echoed into every output.
    pub fn echo(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// Raw text of a key.
    pub fn text(&self, key: &str) -> &str {
        self.values.get(key).map(String::as_str).unwrap_or_else(|| panic!("key '{key}' is missing from the schema"))
    }

    /// A real number; accepts `pi`, `tau` and products or quotients such as
    /// `2*pi/50` or `1/64`.
    pub fn f64(&self, key: &str) -> Result<f64> {
        parse_number(self.text(key)).map_err(|m| bad(key, self.text(key), &m))
    }

    /// A finite real number satisfying `ok`, described by `what` on failure.
    pub fn f64_where(&self, key: &str, what: &str, ok: impl Fn(f64) -> bool) -> Result<f64> {
        let v = self.f64(key)?;
        if ok(v) {
            Ok(v)
        } else {
            Err(bad(key, self.text(key), what))
        }
    }

    /// A non-negative integer.
    pub fn usize(&self, key: &str) -> Result<usize> {
        self.text(key).trim().parse().map_err(|_| bad(key, self.text(key), "expected a non-negative integer"))
    }

    /// An integer of at least `min`.
    pub fn usize_min(&self, key: &str, min: usize) -> Result<usize> {
        let v = self.usize(key)?;
        if v < min {
            return Err(bad(key, self.text(key), &format!("must be at least {min}")));
        }
        Ok(v)
    }

    /// A 64-bit seed.
    pub fn u64(&self, key: &str) -> Result<u64> {
        self.text(key).trim().parse().map_err(|_| bad(key, self.text(key), "expected an unsigned integer"))
    }

    /// `true` or `false`.
    pub fn bool(&self, key: &str) -> Result<bool> {
        match self.text(key).trim() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            _ => Err(bad(key, self.text(key), "expected true or false")),
        }
    }

    /// One of `options`.
    pub fn choice<'a>(&self, key: &str, options: &[&'a str]) -> Result<&'a str> {
        let v = self.text(key).trim();
        options
            .iter()
            .find(|o| **o == v)
            .copied()
            .ok_or_else(|| bad(key, v, &format!("expected one of {}", options.join(", "))))
    }

    /// Comma-separated real numbers.
    pub fn f64_list(&self, key: &str) -> Result<Vec<f64>> {
        let text = self.text(key);
        let out: std::result::Result<Vec<f64>, String> = text.split(',').map(parse_number).collect();
        let out = out.map_err(|m| bad(key, text, &m))?;
        if out.is_empty() {
            return Err(bad(key, text, "expected at least one value"));
        }
        Ok(out)
    }

    /// Comma-separated non-negative integers.
    pub fn usize_list(&self, key: &str) -> Result<Vec<usize>> {
        let text = self.text(key);
        text.split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad(key, text, "expected comma-separated non-negative integers"))
    }
}

fn bad(key: &str, value: &str, why: &str) -> CliError {
    CliError::Config(format!("{key} = '{value}': {why}"))
}

/// Parses `[-]factor (('*' | '/') factor)*` with factors that are decimal
/// numbers, `pi` or `tau`.
pub fn parse_number(text: &str) -> std::result::Result<f64, String> {
    let t = text.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.strip_prefix('+').unwrap_or(t)),
    };
    if body.is_empty() {
        return Err("expected a number".into());
    }
    let mut value = 1.0;
    let mut op = '*';
    let mut rest = body;
    loop {
        let end = rest.find(['*', '/']).unwrap_or(rest.len());
        let factor = match rest[..end].trim() {
            "pi" => PI,
            "tau" => TAU,
            s => s.parse::<f64>().map_err(|_| format!("cannot read '{s}' as a number"))?,
        };
        value = if op == '*' { value * factor } else { value / factor };
        if end == rest.len() {
            break;
        }
        op = rest.as_bytes()[end] as char;
        rest = &rest[end + 1..];
    }
    let v = sign * value;
    if v.is_finite() {
        Ok(v)
    } else {
        Err("value is not finite".into())
    }
}
