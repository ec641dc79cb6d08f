//! Content-addressed result cache. Keys are SHA-256 digests of the canonical
//! JSON of `(op, params, version)`; object keys serialize sorted, so equal
//! parameter sets always hash equally.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::Result;

/// Bumped whenever an output format or algorithm changes.
pub const CACHE_VERSION: u32 = 1;

pub const CACHE_DIR_ENV: &str = "LAGRANGE_SPECTRA_CACHE_DIR";

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CacheKey(String);

impl CacheKey {
    pub fn new(op: &str, params: &Value) -> Self {
        let canonical = serde_json::json!({
            "op": op,
            "params": params,
            "version": CACHE_VERSION,
        });
        let bytes = serde_json::to_vec(&canonical).expect("json values always serialize");
        CacheKey(hex::encode(Sha256::digest(&bytes)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub version: u32,
    pub created_unix: u64,
    pub op: String,
    pub params: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub meta: CacheMeta,
    pub payload_sha256: String,
    pub payload: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// An entry existed but failed validation and was recomputed.
    Repaired,
}

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn entry_path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.as_str()))
    }

    fn load(&self, key: &CacheKey) -> std::result::Result<Option<CacheEntry>, String> {
        let path = self.entry_path(key);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(e.to_string()),
        };
        let entry: CacheEntry = serde_json::from_slice(&bytes).map_err(|e| e.to_string())?;
        if entry.key != key.as_str() || entry.meta.version != CACHE_VERSION {
            return Ok(None);
        }
        if hex::encode(Sha256::digest(entry.payload.as_bytes())) != entry.payload_sha256 {
            return Err("payload checksum mismatch".into());
        }
        Ok(Some(entry))
    }

    fn store(&self, key: &CacheKey, op: &str, params: &Value, payload: &str) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        let created_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let entry = CacheEntry {
            key: key.as_str().to_owned(),
            meta: CacheMeta {
                version: CACHE_VERSION,
                created_unix,
                op: op.to_owned(),
                params: params.clone(),
            },
            payload_sha256: hex::encode(Sha256::digest(payload.as_bytes())),
            payload: payload.to_owned(),
        };
        let tmp = self
            .dir
            .join(format!("{}.{}.tmp", key.as_str(), std::process::id()));
        let mut f = fs::File::create(&tmp)?;
        f.write_all(&serde_json::to_vec(&entry)?)?;
        f.sync_all()?;
        fs::rename(&tmp, self.entry_path(key))?;
        Ok(())
    }

    /// Returns the stored payload for `(op, params)` or computes and stores it.
    pub fn get_or_compute(
        &self,
        op: &str,
        params: &Value,
        compute: impl FnOnce() -> Result<String>,
    ) -> Result<(String, CacheStatus)> {
        let key = CacheKey::new(op, params);
        let mut status = CacheStatus::Miss;
        match self.load(&key) {
            Ok(Some(entry)) => return Ok((entry.payload, CacheStatus::Hit)),
            Ok(None) => {}
            Err(why) => {
                eprintln!(
                    "warning: cache entry {} is corrupted ({why}); recomputing",
                    self.entry_path(&key).display()
                );
                status = CacheStatus::Repaired;
            }
        }
        let payload = compute()?;
        self.store(&key, op, params, &payload)?;
        Ok((payload, status))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn key_ignores_insertion_order() {
        let mut a = serde_json::Map::new();
        a.insert("window".into(), json!(3));
        a.insert("N".into(), json!(2));
        let mut b = serde_json::Map::new();
        b.insert("N".into(), json!(2));
        b.insert("window".into(), json!(3));
        assert_eq!(CacheKey::new("dim", &Value::Object(a)), CacheKey::new("dim", &Value::Object(b)));
        assert_ne!(CacheKey::new("dim", &json!({"N": 2})), CacheKey::new("prune", &json!({"N": 2})));
    }

    #[test]
    fn hit_miss_and_repair() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let params = json!({"N": 2});
        let (p, s) = cache.get_or_compute("op", &params, || Ok("payload".into())).unwrap();
        assert_eq!((p.as_str(), s), ("payload", CacheStatus::Miss));
        let (p, s) = cache
            .get_or_compute("op", &params, || panic!("must not recompute"))
            .unwrap();
        assert_eq!((p.as_str(), s), ("payload", CacheStatus::Hit));
        let path = cache.entry_path(&CacheKey::new("op", &params));
        fs::write(&path, b"{not json").unwrap();
        let (p, s) = cache.get_or_compute("op", &params, || Ok("payload".into())).unwrap();
        assert_eq!((p.as_str(), s), ("payload", CacheStatus::Repaired));
        let (_, s) = cache.get_or_compute("op", &params, || Ok("x".into())).unwrap();
        assert_eq!(s, CacheStatus::Hit);
    }

    #[test]
    fn tampered_payload_is_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let params = json!({});
        cache.get_or_compute("op", &params, || Ok("good".into())).unwrap();
        let path = cache.entry_path(&CacheKey::new("op", &params));
        let text = fs::read_to_string(&path).unwrap().replace("\"good\"", "\"evil\"");
        fs::write(&path, text).unwrap();
        let (p, s) = cache.get_or_compute("op", &params, || Ok("good".into())).unwrap();
        assert_eq!((p.as_str(), s), ("good", CacheStatus::Repaired));
    }
}
