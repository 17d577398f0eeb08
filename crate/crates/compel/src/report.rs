//! Run reports: structured verdicts plus an input digest, rendered either as
//! stable JSON (map keys sorted, exact rational strings) or as flat text.
//! Identical inputs and seed produce byte-identical serialized reports.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs_digest: String,
    pub verdicts: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub version: String,
}

impl RunReport {
    pub fn new(command: &str, inputs_digest: String, verdicts: serde_json::Value) -> Self {
        RunReport {
            command: command.to_string(),
            inputs_digest,
            verdicts,
            seed: None,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn to_json_string(&self) -> String {
        // serde_json::Value maps are ordered by key, so this is byte-stable.
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut lines = Vec::new();
        lines.push(format!("command: {}", self.command));
        lines.push(format!("inputs: {}", self.inputs_digest));
        if let Some(seed) = self.seed {
            lines.push(format!("seed: {}", seed));
        }
        flatten_value("", &self.verdicts, &mut lines);
        lines.push(format!("version: {}", self.version));
        lines.join("\n") + "\n"
    }
}

fn flatten_value(prefix: &str, value: &serde_json::Value, lines: &mut Vec<String>) {
    match value {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_value(&key, v, lines);
            }
        }
        serde_json::Value::Array(items) => {
            if items.iter().all(|v| !v.is_object() && !v.is_array()) {
                let rendered: Vec<String> = items.iter().map(render_scalar).collect();
                lines.push(format!("{prefix}: [{}]", rendered.join(", ")));
            } else {
                for (i, v) in items.iter().enumerate() {
                    flatten_value(&format!("{prefix}[{i}]"), v, lines);
                }
            }
        }
        other => lines.push(format!("{prefix}: {}", render_scalar(other))),
    }
}

fn render_scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn hex_digest(hasher: Sha256) -> String {
    let bytes = hasher.finalize();
    let mut out = String::with_capacity(7 + 2 * bytes.len());
    out.push_str("sha256:");
    for b in bytes {
        out.push_str(&format!("{:02x}", b));
    }
    out
}

/// sha256 over the concatenated contents of the input files, tagged so that
/// reports state what was hashed.
pub fn digest_inputs(paths: &[&Path]) -> String {
    let mut hasher = Sha256::new();
    for p in paths {
        if let Ok(bytes) = std::fs::read(p) {
            hasher.update(&bytes);
        }
    }
    hex_digest(hasher)
}

/// Digest of literal argument strings for commands without input files.
pub fn digest_args(args: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for a in args {
        hasher.update(a.as_bytes());
    }
    hex_digest(hasher)
}
