//! Run manifests: every output file is accompanied by a `<file>.manifest`
//! sidecar recording the command, configuration echo, input digests, tool
//! and mapping-cache versions, and seed, so reruns are auditable and equal
//! manifests imply bit-identical outputs.

use bccd::Result;
use sha2::{Digest, Sha256};
use std::path::Path;

pub struct RunManifest {
    entries: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        let mut m = RunManifest { entries: Vec::new() };
        m.push("command", command);
        m.push("tool_version", env!("CARGO_PKG_VERSION"));
        m.push(
            "mapping_version",
            &format!("{:#010x}", bccd::statements::MAPPING_VERSION),
        );
        m
    }

    pub fn push(&mut self, key: &str, value: &str) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn push_input(&mut self, label: &str, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        self.push(&format!("input_{label}"), &format!("{}", path.display()));
        self.push(&format!("sha256_{label}"), &hex(&digest));
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(&format!("{k}={v}\n"));
        }
        out
    }

    /// Writes `<path>.manifest` next to an output file.
    pub fn write_sidecar(&self, path: &Path) -> Result<()> {
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".manifest");
        std::fs::write(sidecar, self.render())?;
        Ok(())
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
