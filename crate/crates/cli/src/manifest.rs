//! Run manifest: enough provenance to reproduce a run byte-for-byte.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

pub const HITTING_SET_FORMAT: u32 = 1;
pub const CIRCUIT_FORMAT: u32 = 1;
pub const DESIGN_FORMAT: u32 = 1;
pub const REPORT_FORMAT: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command_line: Vec<String>,
    pub config_digest: String,
    pub seed: u64,
    pub format_versions: BTreeMap<String, u32>,
    pub wall_clock_ms: u128,
    pub outputs: Vec<OutputDigest>,
}

impl RunManifest {
    pub fn new(command_line: Vec<String>, config_bytes: &[u8], seed: u64) -> RunManifest {
        let mut versions = BTreeMap::new();
        versions.insert("hitting-set".to_string(), HITTING_SET_FORMAT);
        versions.insert("circuit".to_string(), CIRCUIT_FORMAT);
        versions.insert("design".to_string(), DESIGN_FORMAT);
        versions.insert("cost-report".to_string(), REPORT_FORMAT);
        RunManifest {
            command_line,
            config_digest: sha256_hex(config_bytes),
            seed,
            format_versions: versions,
            wall_clock_ms: 0,
            outputs: Vec::new(),
        }
    }

    pub fn record_output(&mut self, path: &Path, bytes: &[u8]) {
        self.outputs.push(OutputDigest {
            path: path.display().to_string(),
            sha256: sha256_hex(bytes),
        });
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let digest = hasher.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        out.push_str(&format!("{b:02x}"));
    }
    out
}
