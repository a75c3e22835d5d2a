//! Canonical JSON reports.
//!
//! Reports embed the command echo, the crate version and the structured
//! result. Serialization goes through `serde_json::Value`, whose object
//! maps are ordered, so identical inputs produce identical bytes; timing
//! information is written to stderr, never into the report.

use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    /// Resolved inputs in canonical form, sufficient to replay the command
    /// without the original session file.
    pub inputs: Value,
    pub result: Value,
}

impl Report {
    pub fn new(command: impl Into<String>, inputs: Value, result: Value) -> Report {
        Report {
            command: command.into(),
            version: format!("phiflat {}", env!("CARGO_PKG_VERSION")),
            inputs,
            result,
        }
    }

    /// Canonical bytes: sorted keys, two-space indent, trailing newline.
    pub fn to_canonical_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("valid json");
        s.push('\n');
        s
    }
}

/// Write the report to the path, with `-` meaning stdout.
pub fn emit_report(report: &Report, path: &str) -> std::io::Result<()> {
    let bytes = report.to_canonical_json();
    if path == "-" {
        std::io::stdout().write_all(bytes.as_bytes())
    } else {
        std::fs::write(Path::new(path), bytes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn reports_are_byte_stable() {
        let a = Report::new("deep", json!({}), json!({"deep": true, "degree": 2}));
        let b = Report::new("deep", json!({}), json!({"degree": 2, "deep": true}));
        assert_eq!(a.to_canonical_json(), b.to_canonical_json());
        assert!(a.to_canonical_json().ends_with('\n'));
    }
}
