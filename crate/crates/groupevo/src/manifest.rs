//! Run manifest: provenance record emitted next to every command's output.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub subcommand: String,
    pub flags: BTreeMap<String, String>,
    /// SHA-256 of every input file's bytes.
    pub input_digests: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub started_at: String,
    pub finished_at: Option<String>,
    pub warnings: Vec<String>,
}

impl RunManifest {
    pub fn new(subcommand: &str) -> RunManifest {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            subcommand: subcommand.to_string(),
            flags: BTreeMap::new(),
            input_digests: BTreeMap::new(),
            seed: None,
            started_at: chrono::Utc::now().to_rfc3339(),
            finished_at: None,
            warnings: Vec::new(),
        }
    }

    pub fn flag(&mut self, name: &str, value: impl ToString) -> &mut Self {
        self.flags.insert(name.to_string(), value.to_string());
        self
    }

    pub fn digest_input(&mut self, path: &Path) -> Result<&mut Self> {
        let bytes = fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.input_digests.insert(path.display().to_string(), hex);
        Ok(self)
    }

    pub fn warn(&mut self, message: impl ToString) -> &mut Self {
        self.warnings.push(message.to_string());
        self
    }

    pub fn finish_and_write(mut self, dir: &Path) -> Result<()> {
        self.finished_at = Some(chrono::Utc::now().to_rfc3339());
        fs::create_dir_all(dir)?;
        let json = serde_json::to_string_pretty(&self).expect("manifest serializes");
        fs::write(dir.join("run_manifest.json"), json)?;
        Ok(())
    }
}
