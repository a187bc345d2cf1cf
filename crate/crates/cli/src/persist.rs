use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use surface_ym::io::to_json;

/// Writes through a temporary file in the target directory and renames it
/// into place, so readers never see a partial file.
pub fn write_atomic(path: &Path, contents: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn audit_path(out: &Path) -> PathBuf {
    let mut s: OsString = out.as_os_str().to_owned();
    s.push(".audit.jsonl");
    PathBuf::from(s)
}

/// JSON-lines audit record of one run.
#[derive(Debug, Default)]
pub struct Audit {
    lines: Vec<String>,
}

impl Audit {
    pub fn event<T: Serialize>(&mut self, kind: &str, payload: &T) {
        let payload = serde_json::to_value(payload).unwrap_or(Value::Null);
        self.lines.push(to_json(&json!({ "event": kind, "data": payload })));
    }

    pub fn check(&mut self, name: &str, passed: bool, value: f64) {
        self.lines.push(to_json(&json!({ "event": "check", "name": name, "pass": passed, "value": value })));
    }

    pub fn extend(&mut self, other: Audit) {
        self.lines.extend(other.lines);
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}
