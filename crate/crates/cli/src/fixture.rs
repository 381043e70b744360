use std::path::Path;

use serde::Deserialize;
use serde_json::Value;

use crate::error::{CliError, CliResult};

/// A JSON document bundling the inputs of one command. Every key is optional;
/// command-line flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixtureFile {
    pub term: Option<Value>,
    pub element: Option<Value>,
    pub ideal: Option<Value>,
    #[serde(rename = "I")]
    pub i: Option<Value>,
    #[serde(rename = "J")]
    pub j: Option<Value>,
    pub function: Option<Value>,
    pub x: Option<Value>,
    pub strict: Option<bool>,
}

/// Reads inline JSON (anything starting with `{`, `[` or a digit) or the
/// contents of a file.
pub fn read_json(arg: &str) -> CliResult<Value> {
    let trimmed = arg.trim_start();
    let text = if trimmed.starts_with(['{', '[', '"', '-']) || trimmed.starts_with(|c: char| c.is_ascii_digit()) {
        arg.to_string()
    } else {
        std::fs::read_to_string(Path::new(arg)).map_err(|source| CliError::Io { path: arg.to_string(), source })?
    };
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid JSON in {}: {e}", short(arg))))
}

fn short(arg: &str) -> String {
    if arg.len() > 40 {
        format!("{}...", &arg[..arg.char_indices().nth(40).map_or(arg.len(), |(i, _)| i)])
    } else {
        arg.to_string()
    }
}

fn is_term(v: &Value) -> bool {
    v.get("atom").is_some() || v.get("op").is_some()
}

/// A bare term document becomes a fixture with only `term` set.
pub fn load(arg: &str) -> CliResult<FixtureFile> {
    let v = read_json(arg)?;
    if is_term(&v) {
        return Ok(FixtureFile { term: Some(v), ..FixtureFile::default() });
    }
    serde_json::from_value(v).map_err(|e| CliError::Input(format!("fixture: {e}")))
}
