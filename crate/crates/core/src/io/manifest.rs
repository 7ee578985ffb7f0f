use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

use super::ExperimentConfig;
use crate::error::Result;

#[derive(Clone, Debug, Serialize)]
pub struct OutputFile {
    pub name: String,
    pub bytes: u64,
    pub sha256: String,
}

/// Provenance of one run. Unlike the CSV and JSON outputs it records wall
/// clock times, so it differs between reruns.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_hash: String,
    pub code_version: String,
    pub seed: u64,
    pub start_unix: f64,
    pub end_unix: f64,
    pub runtime_seconds: f64,
    pub outputs: Vec<OutputFile>,
}

pub fn unix_now() -> f64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// Hash of the resolved configuration in canonical TOML form.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    sha256_hex(cfg.to_toml().as_bytes())
}

impl RunManifest {
    pub fn new(
        subcommand: &str,
        cfg: &ExperimentConfig,
        start_unix: f64,
        files: &[PathBuf],
    ) -> Result<Self> {
        let mut outputs = Vec::with_capacity(files.len());
        for f in files {
            let bytes = std::fs::read(f)?;
            outputs.push(OutputFile {
                name: f
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_default(),
                bytes: bytes.len() as u64,
                sha256: sha256_hex(&bytes),
            });
        }
        let end_unix = unix_now();
        Ok(RunManifest {
            subcommand: subcommand.into(),
            config_hash: config_hash(cfg),
            code_version: env!("CARGO_PKG_VERSION").into(),
            seed: cfg.seed,
            start_unix,
            end_unix,
            runtime_seconds: end_unix - start_unix,
            outputs,
        })
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}
