use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{ExperimentConfig, SCHEMA_VERSION};

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Hash of the effective configuration (after command-line overrides) in its
/// canonical JSON form.
pub fn config_hash(cfg: &ExperimentConfig) -> anyhow::Result<String> {
    Ok(sha256_hex(serde_json::to_string(cfg)?.as_bytes()))
}

/// Collects the artifacts of one run under `dir`.
pub struct Artifacts {
    dir: PathBuf,
    hash: String,
    files: BTreeMap<String, String>,
}

impl Artifacts {
    pub fn create(dir: &Path, hash: String) -> anyhow::Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            hash,
            files: BTreeMap::new(),
        })
    }

    pub fn write_bytes(&mut self, name: &str, bytes: &[u8]) -> anyhow::Result<()> {
        let path = self.dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.files.insert(name.to_string(), sha256_hex(bytes));
        Ok(())
    }

    /// Pretty JSON with the config hash inserted at the top level.
    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> anyhow::Result<()> {
        let mut v = serde_json::to_value(value)?;
        if let Value::Object(map) = &mut v {
            map.insert("config_hash".into(), Value::String(self.hash.clone()));
        }
        let mut text = serde_json::to_string_pretty(&v)?;
        text.push('\n');
        self.write_bytes(name, text.as_bytes())
    }

    /// CSV whose first line is a `# config_hash=` comment.
    pub fn write_csv(&mut self, name: &str, header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
        let mut text = format!("# config_hash={}\n{}\n", self.hash, header.join(","));
        for r in rows {
            text.push_str(&r.join(","));
            text.push('\n');
        }
        self.write_bytes(name, text.as_bytes())
    }

    /// Writes `summary.json` and then `manifest.json`, which lists every
    /// artifact with its SHA-256.
    pub fn finish(mut self, cfg: &ExperimentConfig, summary: Value) -> anyhow::Result<()> {
        self.write_json("summary.json", &summary)?;
        let manifest = json!({
            "schema_version": SCHEMA_VERSION,
            "command": cfg.command.name(),
            "tool_version": env!("CARGO_PKG_VERSION"),
            "config": cfg,
            "files": self.files,
        });
        let files = std::mem::take(&mut self.files);
        self.write_json("manifest.json", &manifest)?;
        self.files = files;
        Ok(())
    }
}
