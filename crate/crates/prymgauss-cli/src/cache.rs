//! Append-only result cache: one JSON line per run, keyed by a stable digest of
//! the canonical input plus the artifact version. No database; corrupted lines are
//! skipped with a warning and never trusted. An advisory lock file serializes
//! writers within one cache directory.

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

pub const ARTIFACT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunRecord {
    pub spec_hash: String,
    pub command: String,
    /// full invocation as typed, for provenance
    #[serde(default)]
    pub command_line: String,
    pub result: Value,
    pub wall_ms: u64,
    pub artifact_version: String,
    pub timestamp: u64,
    pub seed: Option<u64>,
}

/// Recursively sorts object keys so the digest is independent of field order.
fn canonicalize(v: &Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut sorted: Vec<(&String, &Value)> = map.iter().collect();
            sorted.sort_by_key(|(k, _)| (*k).clone());
            Value::Object(
                sorted
                    .into_iter()
                    .map(|(k, val)| (k.clone(), canonicalize(val)))
                    .collect(),
            )
        }
        Value::Array(items) => Value::Array(items.iter().map(canonicalize).collect()),
        other => other.clone(),
    }
}

/// Stable digest of a canonicalized spec value plus the subcommand it feeds.
pub fn spec_hash(command: &str, spec: &Value) -> String {
    let canon = serde_json::to_string(&serde_json::json!({
        "command": command,
        "spec": canonicalize(spec),
    }))
    .expect("serializable");
    let mut hasher = Sha256::new();
    hasher.update(canon.as_bytes());
    format!("{:x}", hasher.finalize())
}

pub struct Cache {
    file: PathBuf,
    lock: PathBuf,
}

pub struct CacheLock<'a> {
    cache: &'a Cache,
}

impl Drop for CacheLock<'_> {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.cache.lock);
    }
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).with_context(|| format!("creating cache dir {}", dir.display()))?;
        Ok(Cache {
            file: dir.join("runs.jsonl"),
            lock: dir.join("runs.jsonl.lock"),
        })
    }

    /// Advisory lock for the duration of a run; stale locks older than an hour
    /// are broken.
    pub fn lock(&self) -> Result<CacheLock<'_>> {
        for _ in 0..200 {
            match OpenOptions::new()
                .write(true)
                .create_new(true)
                .open(&self.lock)
            {
                Ok(mut f) => {
                    let _ = writeln!(f, "{}", std::process::id());
                    return Ok(CacheLock { cache: self });
                }
                Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                    if let Ok(meta) = fs::metadata(&self.lock) {
                        if let Ok(modified) = meta.modified() {
                            if modified
                                .elapsed()
                                .map(|d| d.as_secs() > 3600)
                                .unwrap_or(false)
                            {
                                let _ = fs::remove_file(&self.lock);
                                continue;
                            }
                        }
                    }
                    std::thread::sleep(std::time::Duration::from_millis(25));
                }
                Err(e) => return Err(e).context("creating cache lock"),
            }
        }
        anyhow::bail!(
            "cache at {} is locked by another process",
            self.file.display()
        );
    }

    /// Most recent valid record for this hash and the current artifact version.
    pub fn lookup(&self, hash: &str) -> Option<RunRecord> {
        let file = fs::File::open(&self.file).ok()?;
        let mut found = None;
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let Ok(line) = line else { break };
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<RunRecord>(&line) {
                Ok(rec) => {
                    if rec.spec_hash == hash && rec.artifact_version == ARTIFACT_VERSION {
                        found = Some(rec);
                    }
                }
                Err(e) => {
                    eprintln!(
                        "warning: skipping corrupted cache line {} in {}: {e}",
                        lineno + 1,
                        self.file.display()
                    );
                }
            }
        }
        found
    }

    pub fn append(&self, record: &RunRecord) -> Result<()> {
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.file)
            .with_context(|| format!("opening cache {}", self.file.display()))?;
        let line = serde_json::to_string(record)?;
        writeln!(f, "{line}")?;
        Ok(())
    }
}

pub fn now_epoch_secs() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}
