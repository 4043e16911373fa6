//! Run manifests: every output document carries the fully resolved
//! configuration, and every result record embeds the manifest digest so
//! records can be traced back to the run that produced them.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use pcoproc::oracles::digest_hex;
use serde::Serialize;
use serde_json::{json, Value};

use crate::CliError;

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub subcommand: String,
    pub version: String,
    pub seed: u64,
    pub config: Value,
    /// Digest over (subcommand, version, seed, config); wall-clock fields
    /// below are excluded so replays share the digest.
    pub digest: String,
    pub started_unix: f64,
    pub finished_unix: f64,
    pub wall_seconds: f64,
}

fn now_unix() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

impl Manifest {
    pub fn start(subcommand: &str, seed: u64, config: Value) -> Self {
        let version = env!("CARGO_PKG_VERSION").to_string();
        let core = json!({
            "subcommand": subcommand,
            "version": version,
            "seed": seed,
            "config": config,
        });
        let digest = digest_hex(core.to_string().as_bytes());
        Self {
            subcommand: subcommand.to_string(),
            version,
            seed,
            config,
            digest,
            started_unix: now_unix(),
            finished_unix: 0.0,
            wall_seconds: 0.0,
        }
    }

    /// Stamps the end time and wraps the records into the output document.
    pub fn into_document(mut self, results: Vec<Value>) -> Value {
        self.finished_unix = now_unix();
        self.wall_seconds = self.finished_unix - self.started_unix;
        json!({
            "manifest": self,
            "results": results,
        })
    }
}

/// Writes the document to `out`, or stdout when no path is given.
pub fn emit(document: &Value, out: Option<&Path>) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(document)
        .map_err(|e| CliError::Runtime(format!("serializing results: {e}")))?;
    match out {
        Some(path) => std::fs::write(path, text + "\n")
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
