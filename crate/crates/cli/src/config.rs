//! Config files: a JSON object or `key = value` lines. Keys are long flag
//! names without the dashes; command-line flags take precedence.

use std::ffi::OsString;
use std::path::Path;

use netgames::{Error, Result};

/// Parses `text` into ordered `(key, value)` pairs. Booleans stay as
/// `"true"`/`"false"`; arrays become comma-separated lists.
pub fn parse(text: &str) -> Result<Vec<(String, String)>> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        let value: serde_json::Value = serde_json::from_str(trimmed)?;
        let obj = value
            .as_object()
            .ok_or_else(|| Error::InvalidInput("config must be a JSON object".into()))?;
        return obj.iter().map(|(k, v)| Ok((k.clone(), scalar(k, v)?))).collect();
    }
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidInput(format!("config line {}: expected key = value", i + 1)))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}

fn scalar(key: &str, v: &serde_json::Value) -> Result<String> {
    use serde_json::Value;
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        Value::Array(items) => {
            let parts: Result<Vec<String>> = items.iter().map(|x| scalar(key, x)).collect();
            Ok(parts?.join(","))
        }
        _ => Err(Error::InvalidInput(format!("config key {key:?} must be a scalar or list"))),
    }
}

/// Inserts config entries after the subcommand name unless the flag is
/// already present. `args[0]` is the program name.
pub fn merge(args: Vec<OsString>, pairs: &[(String, String)]) -> Vec<OsString> {
    let subcommands = ["gen-network", "simulate", "sweep", "analyze"];
    let Some(at) = args.iter().position(|a| subcommands.iter().any(|s| a == s)) else {
        return args;
    };
    let given = |key: &str| {
        let flag = format!("--{key}");
        let prefix = format!("--{key}=");
        args.iter().any(|a| a.to_str().is_some_and(|s| s == flag || s.starts_with(&prefix)))
    };
    let mut extra = Vec::new();
    for (key, value) in pairs {
        let key = key.replace('_', "-");
        if key == "config" || given(&key) {
            continue;
        }
        match value.as_str() {
            "true" => extra.push(OsString::from(format!("--{key}"))),
            "false" => {}
            _ => extra.push(OsString::from(format!("--{key}={value}"))),
        }
    }
    let mut out = args;
    out.splice(at + 1..at + 1, extra);
    out
}

/// Finds `--config FILE` or `--config=FILE` in raw arguments.
pub fn find_config(args: &[OsString]) -> Option<&Path> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        let s = a.to_str()?;
        if s == "--config" {
            return it.next().map(Path::new);
        }
        if let Some(path) = s.strip_prefix("--config=") {
            return Some(Path::new(path));
        }
    }
    None
}
