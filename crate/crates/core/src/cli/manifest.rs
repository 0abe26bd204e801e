//! Machine-readable record of one invocation.

use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

pub const MANIFEST_FORMAT: &str = "rigorkit.manifest/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputHash {
    /// File path as given, or `builtin:<id>` for compiled-in corpus entries.
    pub name: String,
    pub sha256: String,
}

impl InputHash {
    pub fn of_bytes(name: impl Into<String>, bytes: &[u8]) -> InputHash {
        InputHash {
            name: name.into(),
            sha256: hex(&Sha256::digest(bytes)),
        }
    }

    pub fn of_file(path: &Path) -> std::io::Result<InputHash> {
        Ok(InputHash::of_bytes(path.display().to_string(), &std::fs::read(path)?))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaskRecord {
    pub id: String,
    pub verdict: String,
    /// Whether the outcome counts against the exit status.
    pub counts: bool,
    pub ok: bool,
    pub millis: u128,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub format: String,
    pub tool: String,
    pub version: String,
    pub command: String,
    pub arguments: Vec<String>,
    pub inputs: Vec<InputHash>,
    pub tasks: Vec<TaskRecord>,
    pub exit_code: i32,
    pub total_millis: u128,
}

impl RunManifest {
    pub fn new(command: &str, arguments: Vec<String>) -> RunManifest {
        RunManifest {
            format: MANIFEST_FORMAT.into(),
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            arguments,
            inputs: Vec::new(),
            tasks: Vec::new(),
            exit_code: 0,
            total_millis: 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    /// The manifest with every timing field zeroed, for reproducibility checks.
    pub fn without_timings(&self) -> RunManifest {
        let mut m = self.clone();
        m.total_millis = 0;
        for t in &mut m.tasks {
            t.millis = 0;
        }
        m
    }
}
