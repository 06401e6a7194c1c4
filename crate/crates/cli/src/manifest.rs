//! Run manifests: the resolved configuration, input and output digests and
//! a command summary, written as TOML next to each output file. Nothing
//! time- or host-dependent goes in, so reruns produce identical manifests.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::Resolved;

#[derive(Debug, Serialize)]
struct FileDigest {
    path: String,
    sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    command: String,
    version: String,
    config: Resolved,
    inputs: BTreeMap<String, FileDigest>,
    outputs: BTreeMap<String, FileDigest>,
    summary: BTreeMap<String, toml::Value>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn digest(path: &Path) -> anyhow::Result<FileDigest> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(FileDigest {
        path: path.display().to_string(),
        sha256: sha256_hex(&bytes),
    })
}

/// `out.ext` gets `out.ext.manifest.toml`.
pub fn manifest_path(output: &Path) -> PathBuf {
    let mut name = output.as_os_str().to_owned();
    name.push(".manifest.toml");
    PathBuf::from(name)
}

impl Manifest {
    pub fn new(command: &str, config: Resolved) -> Self {
        Manifest {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            summary: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, role: &str, path: &Path) -> anyhow::Result<()> {
        self.inputs.insert(role.into(), digest(path)?);
        Ok(())
    }

    /// Gazetteer directories are digested list by list.
    pub fn input_dir(&mut self, role: &str, dir: &Path, files: &[&str]) -> anyhow::Result<()> {
        for f in files {
            let path = dir.join(f);
            if path.exists() {
                self.inputs.insert(format!("{role}/{f}"), digest(&path)?);
            }
        }
        Ok(())
    }

    pub fn output(&mut self, role: &str, path: &Path) -> anyhow::Result<()> {
        self.outputs.insert(role.into(), digest(path)?);
        Ok(())
    }

    pub fn summary<V: Into<toml::Value>>(&mut self, key: &str, value: V) {
        self.summary.insert(key.into(), value.into());
    }

    /// Writes the manifest beside `output`.
    pub fn write_beside(&self, output: &Path) -> anyhow::Result<PathBuf> {
        let path = manifest_path(output);
        let text = toml::to_string(self).context("serializing manifest")?;
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
