//! Config loading with located diagnostics, and guarded output writing.

use std::fs;
use std::path::{Path, PathBuf};

use flowband_core::Error as CoreError;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// Version of every config and output file layout this build understands.
pub const FORMAT_VERSION: u32 = 1;

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

/// Parse JSON, reporting syntax and type errors as `path:line:column`.
pub fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> CliResult<T> {
    serde_json::from_str(text).map_err(|e| {
        CliError::config(format!(
            "{}:{}:{}: {}",
            path.display(),
            e.line(),
            e.column(),
            strip_position(&e.to_string())
        ))
    })
}

fn strip_position(msg: &str) -> &str {
    msg.find(" at line ").map_or(msg, |i| &msg[..i])
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> CliResult<(T, String)> {
    let text = read_text(path)?;
    let value = parse_json(path, &text)?;
    Ok((value, text))
}

/// Reject files written for a different layout version.
pub fn check_version(path: &Path, text: &str, version: Option<u32>) -> CliResult<()> {
    match version {
        Some(FORMAT_VERSION) | None => Ok(()),
        Some(v) => Err(located(
            path,
            text,
            "format_version",
            format!("format_version {v} is not supported (expected {FORMAT_VERSION})"),
        )),
    }
}

/// Turn a validation failure into a diagnostic pointing at the offending
/// field's line when it can be found.
pub fn validation_error(path: &Path, text: &str, err: CoreError) -> CliError {
    match err.field().map(str::to_string) {
        Some(field) => {
            let mut e = CliError::from_core("", err);
            let line = locate_field(text, &field).map_or(String::new(), |l| format!(":{l}"));
            e.message = format!("{}{line}: {}", path.display(), e.message.trim_start_matches(": "));
            e
        }
        None => CliError::from_core(&path.display().to_string(), err),
    }
}

fn located(path: &Path, text: &str, field: &str, message: String) -> CliError {
    let line = locate_field(text, field).map_or(String::new(), |l| format!(":{l}"));
    CliError::config(format!("{}{line}: {message}", path.display()))
}

/// 1-based line of the last key of a dotted field path such as
/// `plan.milestones[1].session`, searching each key after the previous one.
/// An index `[i]` moves to the start of the `i`-th element of the array that
/// follows the key. Falls back to the deepest segment found.
pub fn locate_field(text: &str, field: &str) -> Option<usize> {
    let mut pos = 0;
    let mut found = None;
    for seg in field.split('.') {
        let (key, index) = match seg.split_once('[') {
            Some((k, rest)) => (k, rest.trim_end_matches(']').parse::<usize>().ok()),
            None => (seg, None),
        };
        if !key.is_empty() {
            let needle = format!("\"{key}\"");
            match text[pos..].find(&needle) {
                Some(off) => {
                    found = Some(pos + off);
                    pos += off + needle.len();
                }
                None => break,
            }
        }
        if let Some(i) = index {
            match array_element(text, pos, i) {
                Some(at) => {
                    found = Some(at);
                    pos = at;
                }
                None => break,
            }
        }
    }
    found.map(|at| line_of(text, at))
}

/// Byte offset of element `i` of the first JSON array opening at or after `from`.
fn array_element(text: &str, from: usize, i: usize) -> Option<usize> {
    let bytes = text.as_bytes();
    let open = from + text[from..].find('[')?;
    let mut depth = 0usize;
    let mut in_str = false;
    let mut escaped = false;
    let mut element = 0usize;
    for (at, &b) in bytes.iter().enumerate().skip(open + 1) {
        if in_str {
            match b {
                _ if escaped => escaped = false,
                b'\\' => escaped = true,
                b'"' => in_str = false,
                _ => {}
            }
            continue;
        }
        match b {
            b'"' => in_str = true,
            b'[' | b'{' => depth += 1,
            b']' | b'}' if depth == 0 => return None,
            b']' | b'}' => depth -= 1,
            b',' if depth == 0 => element += 1,
            _ => {}
        }
        if element == i && depth <= 1 && !b.is_ascii_whitespace() && b != b',' {
            return Some(at);
        }
    }
    None
}

fn line_of(text: &str, at: usize) -> usize {
    text[..at].matches('\n').count() + 1
}

/// Writes files into one output location, refusing to replace existing
/// files unless forced.
pub struct OutputGuard {
    force: bool,
}

impl OutputGuard {
    pub fn new(force: bool) -> Self {
        OutputGuard { force }
    }

    /// Fail before anything is written if any target already exists.
    pub fn check(&self, paths: &[PathBuf]) -> CliResult<()> {
        if self.force {
            return Ok(());
        }
        match paths.iter().find(|p| p.exists()) {
            Some(p) => Err(CliError::io(p, "already exists (pass --force to overwrite)")),
            None => Ok(()),
        }
    }

    pub fn write(&self, path: &Path, bytes: &[u8]) -> CliResult<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        }
        fs::write(path, bytes).map_err(|e| CliError::io(path, e))
    }
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = serde_json::to_vec_pretty(value).expect("serializable");
    out.push(b'\n');
    out
}

pub fn csv_bytes<T: Serialize>(rows: &[T]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("csv rows serialize");
    }
    w.into_inner().expect("in-memory writer")
}
