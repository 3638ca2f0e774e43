//! Run manifests: every command records its invocation, resolved
//! parameters, seed, tool version, and the SHA-256 digest of each file it
//! wrote. Re-running the recorded command reproduces the outputs
//! byte-identically.

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub resolved: serde_json::Value,
    pub base_seed: u64,
    pub version: String,
    /// file name -> hex SHA-256 of its bytes.
    pub outputs: BTreeMap<String, String>,
}

pub struct ManifestWriter {
    out_dir: PathBuf,
    manifest: RunManifest,
}

impl ManifestWriter {
    pub fn new(out_dir: &Path, resolved: serde_json::Value, base_seed: u64) -> io::Result<Self> {
        std::fs::create_dir_all(out_dir)?;
        Ok(Self {
            out_dir: out_dir.to_path_buf(),
            manifest: RunManifest {
                command: std::env::args().collect(),
                resolved,
                base_seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                outputs: BTreeMap::new(),
            },
        })
    }

    /// Write one output file and record its digest.
    pub fn write_output(&mut self, name: &str, bytes: &[u8]) -> io::Result<PathBuf> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, bytes)?;
        let digest = hex::encode(Sha256::digest(bytes));
        self.manifest.outputs.insert(name.to_string(), digest);
        Ok(path)
    }

    /// Write `manifest.json` and return its path.
    pub fn finish(self) -> io::Result<PathBuf> {
        let path = self.out_dir.join("manifest.json");
        let body = serde_json::to_string_pretty(&self.manifest).expect("manifest serializes");
        std::fs::write(&path, body)?;
        Ok(path)
    }
}
