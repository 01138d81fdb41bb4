//! Output collection and the run manifest written beside every set of
//! output files.

use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::failure::{Failure, Outcome, StageExt};

pub const MANIFEST: &str = "manifest.json";
const OUT_DIR_ENV: &str = "SEER_NF_OUT_DIR";

pub fn out_dir(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Serialize)]
pub struct FileRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub arguments: Vec<String>,
    /// `ok` or `failed`.
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub inputs: Vec<FileRecord>,
    pub config_digest: Option<String>,
    pub config: Option<serde_json::Value>,
    pub outputs: Vec<FileRecord>,
    pub started_at: String,
    pub finished_at: String,
}

/// Inputs read and outputs produced by one command. Outputs stay in memory
/// until the command has succeeded, so a failed run leaves only a manifest.
pub struct Run {
    command: &'static str,
    started_at: String,
    inputs: Vec<PathBuf>,
    config: Option<serde_json::Value>,
    outputs: Vec<(String, Vec<u8>)>,
}

impl Run {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            started_at: chrono::Utc::now().to_rfc3339(),
            inputs: Vec::new(),
            config: None,
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    pub fn config(&mut self, config: serde_json::Value) {
        self.config = Some(config);
    }

    pub fn output(&mut self, name: impl Into<String>, contents: impl Into<Vec<u8>>) {
        self.outputs.push((name.into(), contents.into()));
    }

    /// Writes the outputs (only when `result` is Ok) and then the manifest.
    pub fn finish<T>(self, dir: &Path, result: Outcome<T>) -> Outcome<T> {
        std::fs::create_dir_all(dir).stage("output")?;
        let mut written = Vec::new();
        let mut result = result;
        if result.is_ok() {
            for (name, contents) in &self.outputs {
                let path = dir.join(name);
                if let Err(e) = std::fs::write(&path, contents) {
                    result = Err(Failure {
                        code: 1,
                        stage: "output",
                        error: anyhow::Error::new(e).context(format!("writing {}", path.display())),
                    });
                    break;
                }
                written.push(FileRecord {
                    path: path.display().to_string(),
                    sha256: sha256_hex(contents),
                });
            }
        }
        let inputs = self
            .inputs
            .iter()
            .map(|p| FileRecord {
                path: p.display().to_string(),
                sha256: std::fs::read(p).map(|b| sha256_hex(&b)).unwrap_or_default(),
            })
            .collect();
        let failure = result.as_ref().err();
        let manifest = RunManifest {
            tool: "seer-nf",
            version: env!("CARGO_PKG_VERSION"),
            command: self.command.to_string(),
            arguments: std::env::args().skip(1).collect(),
            status: if failure.is_some() { "failed" } else { "ok" },
            failed_stage: failure.map(|f| f.stage),
            error: failure.map(|f| format!("{:#}", f.error)),
            inputs,
            config_digest: self
                .config
                .as_ref()
                .map(|c| sha256_hex(serde_json::to_string(c).expect("config serializes").as_bytes())),
            config: self.config,
            outputs: written,
            started_at: self.started_at,
            finished_at: chrono::Utc::now().to_rfc3339(),
        };
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(dir.join(MANIFEST), json + "\n").stage("output")?;
        result
    }
}
