//! Small text-file helpers shared by the CSV and report formats.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        }
    }
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_path_buf(), line, message: message.into() }
}

pub(crate) fn parse_f64(path: &Path, line: usize, s: &str) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|_| parse_err(path, line, format!("expected a number, found `{}`", s.trim())))
}

pub(crate) fn parse_u64(path: &Path, line: usize, s: &str) -> Result<u64> {
    s.trim().parse::<u64>().map_err(|_| parse_err(path, line, format!("expected an integer, found `{}`", s.trim())))
}

/// Splits a comma-separated row into exactly `n` trimmed fields.
pub(crate) fn fields<'a>(path: &Path, line: usize, row: &'a str, n: usize) -> Result<Vec<&'a str>> {
    let parts: Vec<&str> = row.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(parse_err(path, line, format!("expected {n} columns, found {}", parts.len())));
    }
    Ok(parts)
}

/// `key = value` lines, in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues(pub Vec<(String, String)>);

impl KeyValues {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.0.push((key.into(), value.to_string()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k} = {v}\n")).collect()
    }

    pub fn parse(path: &Path, text: &str) -> Result<Self> {
        let mut out = KeyValues::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| parse_err(path, i + 1, "expected `key = value`"))?;
            out.push(k.trim(), v.trim());
        }
        Ok(out)
    }
}
