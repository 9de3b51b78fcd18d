//! Run provenance: what was invoked, on which inputs, producing what.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: Vec<String>,
    pub version: String,
    pub seeds: Vec<u64>,
    /// Path to SHA-256 of the file contents.
    pub inputs: BTreeMap<String, String>,
    /// Stream name to SHA-256 of what was written.
    pub outputs: BTreeMap<String, String>,
    pub timestamp: u64,
}

impl RunManifest {
    pub fn new(command: Vec<String>) -> Self {
        RunManifest {
            command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs()),
            ..Default::default()
        }
    }

    pub fn add_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        self.inputs.insert(path.display().to_string(), sha256_hex(&bytes));
        Ok(())
    }

    pub fn add_output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.insert(name.to_string(), sha256_hex(bytes));
    }

    /// Recomputes every input digest; returns the paths that no longer match.
    pub fn stale_inputs(&self) -> Result<Vec<String>> {
        let mut stale = Vec::new();
        for (path, digest) in &self.inputs {
            if &sha256_hex(&std::fs::read(path)?) != digest {
                stale.push(path.clone());
            }
        }
        Ok(stale)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }

    #[test]
    fn digests_recompute() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.txt");
        std::fs::write(&path, "3 3\n1 2 3\n").unwrap();
        let mut m = RunManifest::new(vec!["verify".into()]);
        m.add_input(&path).unwrap();
        m.add_output("stdout", b"{}");
        assert!(m.stale_inputs().unwrap().is_empty());
        std::fs::write(&path, "3 3\n").unwrap();
        assert_eq!(m.stale_inputs().unwrap().len(), 1);
    }
}
