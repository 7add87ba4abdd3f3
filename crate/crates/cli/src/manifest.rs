//! `manifest.json`: what ran, on which bytes, producing which files.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{Cli, Failure};

#[derive(Debug, Serialize)]
struct InputRecord {
    source: String,
    sha256: String,
    bytes: usize,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    tool: &'static str,
    version: &'static str,
    config: serde_json::Value,
    inputs: Vec<InputRecord>,
    outputs: Vec<String>,
    unix_time: u64,
}

impl Manifest {
    pub fn new(cli: &Cli) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            config: serde_json::to_value(cli).unwrap_or(serde_json::Value::Null),
            inputs: Vec::new(),
            outputs: Vec::new(),
            unix_time: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
        }
    }

    pub fn add_input(&mut self, source: &str, bytes: &[u8]) {
        self.inputs.push(InputRecord {
            source: source.to_owned(),
            sha256: hex::encode(Sha256::digest(bytes)),
            bytes: bytes.len(),
        });
    }

    pub fn set_outputs(&mut self, outputs: Vec<String>) {
        self.outputs = outputs;
    }

    pub fn write(&self, dir: &Path) -> Result<(), Failure> {
        let path = dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::Input)
    }
}
