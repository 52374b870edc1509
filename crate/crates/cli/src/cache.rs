//! On-disk result cache: one JSON file per key, named by the SHA-256 of the
//! key's canonical JSON form.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct CacheKey {
    pub m: usize,
    pub r: usize,
    pub s: usize,
    pub e: Option<usize>,
    pub n: usize,
    pub kind: &'static str,
    pub engine: &'static str,
}

impl CacheKey {
    fn file_name(&self) -> String {
        let canonical = serde_json::to_string(self).expect("key serializes");
        format!("{:x}.json", Sha256::digest(canonical.as_bytes()))
    }
}

/// Raised by `--verify-cache` when a stored value differs from a fresh one.
#[derive(Debug)]
pub struct StaleEntry {
    pub path: PathBuf,
}

impl std::fmt::Display for StaleEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "cache entry {} differs from a fresh computation", self.path.display())
    }
}

impl std::error::Error for StaleEntry {}

#[derive(Debug, Clone)]
pub struct Cache {
    dir: Option<PathBuf>,
    verify: bool,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>, verify: bool) -> Self {
        Cache { dir, verify }
    }

    pub fn disabled() -> Self {
        Cache {
            dir: None,
            verify: false,
        }
    }

    fn read(path: &Path, key: &CacheKey) -> Option<Value> {
        let text = fs::read_to_string(path).ok()?;
        let entry: Value = serde_json::from_str(&text).ok()?;
        // guard against hash collisions and hand-edited files
        if entry.get("key")? != &serde_json::to_value(key).ok()? {
            return None;
        }
        entry.get("value").cloned()
    }

    fn write(dir: &Path, path: &Path, key: &CacheKey, value: &Value) -> anyhow::Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        let entry = json!({"key": key, "value": value, "timestamp": stamp});
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        serde_json::to_writer(&mut tmp, &entry)?;
        tmp.write_all(b"\n")?;
        tmp.persist(path)
            .map_err(|e| anyhow!("writing {}: {}", path.display(), e.error))?;
        Ok(())
    }

    /// Returns the cached value for `key`, computing and storing it on a miss.
    pub fn get_or_compute<F>(&self, key: &CacheKey, compute: F) -> anyhow::Result<Value>
    where
        F: Fn() -> anyhow::Result<Value>,
    {
        let Some(dir) = &self.dir else {
            return compute();
        };
        let path = dir.join(key.file_name());
        if let Some(hit) = Self::read(&path, key) {
            if self.verify {
                let fresh = compute()?;
                if serde_json::to_string(&fresh)? != serde_json::to_string(&hit)? {
                    return Err(StaleEntry { path }.into());
                }
            }
            return Ok(hit);
        }
        let value = compute()?;
        Self::write(dir, &path, key, &value)?;
        Ok(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cell::Cell;

    fn key(n: usize) -> CacheKey {
        CacheKey {
            m: 1,
            r: 2,
            s: 1,
            e: None,
            n,
            kind: "test",
            engine: "0",
        }
    }

    #[test]
    fn miss_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()), false);
        let calls = Cell::new(0);
        let f = || {
            calls.set(calls.get() + 1);
            Ok(json!([1, 2, 3]))
        };
        let a = cache.get_or_compute(&key(1), f).unwrap();
        let b = cache.get_or_compute(&key(1), f).unwrap();
        assert_eq!(a, b);
        assert_eq!(calls.get(), 1);
        cache.get_or_compute(&key(2), f).unwrap();
        assert_eq!(calls.get(), 2);
    }

    #[test]
    fn verify_detects_tampering() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(Some(dir.path().to_path_buf()), false);
        cache.get_or_compute(&key(1), || Ok(json!(7))).unwrap();
        let path = dir.path().join(key(1).file_name());
        let text = fs::read_to_string(&path).unwrap().replace("\"value\":7", "\"value\":8");
        fs::write(&path, text).unwrap();
        let verifying = Cache::new(Some(dir.path().to_path_buf()), true);
        let err = verifying.get_or_compute(&key(1), || Ok(json!(7))).unwrap_err();
        assert!(err.downcast_ref::<StaleEntry>().is_some());
    }
}
