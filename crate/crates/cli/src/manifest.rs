use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::Context;
use serde::{Deserialize, Serialize};

/// Provenance written next to every data file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    /// Full text of the config file, if one was used.
    pub config: Option<String>,
    pub parameters: serde_json::Value,
    pub seed: Option<u64>,
    pub rng: String,
    pub version: String,
    pub started_unix: u64,
    pub finished_unix: u64,
    pub output: String,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

pub struct ManifestBuilder {
    command: String,
    config: Option<String>,
    parameters: serde_json::Value,
    seed: Option<u64>,
    started: u64,
}

impl ManifestBuilder {
    pub fn new(
        command: &str,
        config: Option<String>,
        parameters: serde_json::Value,
        seed: Option<u64>,
    ) -> Self {
        ManifestBuilder {
            command: command.into(),
            config,
            parameters,
            seed,
            started: now(),
        }
    }

    pub fn finish(&self, output: &Path) -> RunManifest {
        RunManifest {
            command: self.command.clone(),
            args: std::env::args().skip(1).collect(),
            config: self.config.clone(),
            parameters: self.parameters.clone(),
            seed: self.seed,
            rng: agpir::rng::RNG_ALGORITHM.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            started_unix: self.started,
            finished_unix: now(),
            output: output.display().to_string(),
        }
    }

    /// Writes `data` to `path` and the manifest to its sidecar.
    pub fn write(&self, path: &Path, data: &str) -> anyhow::Result<PathBuf> {
        std::fs::write(path, data).with_context(|| format!("writing {}", path.display()))?;
        let side = sidecar_path(path);
        let json = serde_json::to_string_pretty(&self.finish(path))?;
        std::fs::write(&side, json + "\n")
            .with_context(|| format!("writing {}", side.display()))?;
        Ok(side)
    }
}

/// `rates.csv` → `rates.manifest.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("manifest.json")
}
