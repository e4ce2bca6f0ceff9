//! Content-hashed JSON cache for the expensive builds.

use std::fs;
use std::path::{Path, PathBuf};

use hypermirror::fan::{Cone, Fan};
use hypermirror::group::{SignedPerm, Subgroup};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::Result;

pub type Matrix = [[i64; 4]; 4];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheKind {
    Fan,
    SubgroupClasses,
    Table,
}

impl CacheKind {
    fn file_stem(self) -> &'static str {
        match self {
            Self::Fan => "fan",
            Self::SubgroupClasses => "subgroup-classes",
            Self::Table => "table",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry<T> {
    pub kind: CacheKind,
    pub hash: String,
    pub payload: T,
}

impl<T: Serialize> CacheEntry<T> {
    pub fn new(kind: CacheKind, payload: T) -> Result<Self> {
        Ok(Self { kind, hash: content_hash(&payload)?, payload })
    }
}

/// SHA-256 of the compact JSON serialization with object keys sorted.
pub fn content_hash<T: Serialize>(payload: &T) -> Result<String> {
    let bytes = serde_json::to_vec(&canonical(serde_json::to_value(payload)?))?;
    Ok(hex::encode(Sha256::digest(&bytes)))
}

fn canonical(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, canonical(v))).collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(canonical).collect()),
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CacheStatus {
    Hit,
    Built,
    Rebuilt,
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path(&self, kind: CacheKind, key: &str) -> PathBuf {
        self.dir.join(format!("{}-{key}.json", kind.file_stem()))
    }

    /// Loads a valid entry, or builds and stores one. Unreadable, tampered
    /// or invalid entries are rebuilt with a warning.
    pub fn load_or_build<T, V, B>(&self, kind: CacheKind, key: &str, valid: V, build: B) -> Result<(T, CacheStatus)>
    where
        T: Serialize + DeserializeOwned,
        V: Fn(&T) -> bool,
        B: FnOnce() -> Result<T>,
    {
        let path = self.path(kind, key);
        let status = match read_entry::<T>(&path, kind) {
            Ok(Some(payload)) if valid(&payload) => return Ok((payload, CacheStatus::Hit)),
            Ok(None) => CacheStatus::Built,
            Ok(Some(_)) => {
                log::warn!("cache entry {} failed validation; rebuilding", path.display());
                CacheStatus::Rebuilt
            }
            Err(reason) => {
                log::warn!("cache entry {} is corrupt ({reason}); rebuilding", path.display());
                CacheStatus::Rebuilt
            }
        };
        let payload = build()?;
        if let Err(e) = self.write(&path, &CacheEntry::new(kind, &payload)?) {
            log::warn!("could not write cache entry {}: {e}", path.display());
        }
        Ok((payload, status))
    }

    fn write<T: Serialize>(&self, path: &Path, entry: &CacheEntry<T>) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let text = serde_json::to_string(entry).map_err(std::io::Error::other)?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text)?;
        fs::rename(tmp, path)
    }
}

fn read_entry<T: Serialize + DeserializeOwned>(path: &Path, kind: CacheKind) -> std::result::Result<Option<T>, String> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.to_string()),
    };
    let entry: CacheEntry<T> = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    if entry.kind != kind {
        return Err(format!("kind {:?}", entry.kind));
    }
    let hash = content_hash(&entry.payload).map_err(|e| e.to_string())?;
    if hash != entry.hash {
        return Err("hash mismatch".into());
    }
    Ok(Some(entry.payload))
}

pub fn cone_payload(fan: &Fan) -> Vec<Matrix> {
    fan.cones().iter().map(|c| std::array::from_fn(|i| std::array::from_fn(|j| c.generators()[i][j]))).collect()
}

pub fn fan_from_payload(cones: &[Matrix]) -> Option<Fan> {
    let cones = cones
        .iter()
        .map(|m| Cone::new(m.iter().map(|r| r.to_vec()).collect()).ok())
        .collect::<Option<Vec<_>>>()?;
    Fan::new(cones).ok()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassRecord {
    pub generators: Vec<Matrix>,
    pub class_size: usize,
    pub normalizer_order: usize,
}

impl ClassRecord {
    pub fn subgroup(&self) -> Option<Subgroup<SignedPerm>> {
        let gens = self.generators.iter().map(|m| SignedPerm::from_rows(*m).ok()).collect::<Option<Vec<_>>>()?;
        Some(Subgroup::generate(&gens))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub generators: Vec<Matrix>,
    pub gap_index: Option<usize>,
    pub q4: i64,
    pub q80: i64,
    pub pic: i64,
    pub ker: i64,
    #[serde(rename = "picY")]
    pub pic_y: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn entry_round_trip() {
        let entry = CacheEntry::new(CacheKind::Table, vec![1, 2, 3]).unwrap();
        let text = serde_json::to_string(&entry).unwrap();
        let back: CacheEntry<Vec<i32>> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, entry);
    }

    #[test]
    fn corrupt_entry_is_rebuilt() {
        let dir = tempfile::tempdir().unwrap();
        let cache = Cache::new(dir.path());
        let (v, s) = cache.load_or_build(CacheKind::Table, "t", |_: &Vec<i32>| true, || Ok(vec![7])).unwrap();
        assert_eq!((v, s), (vec![7], CacheStatus::Built));
        let (_, s) = cache.load_or_build(CacheKind::Table, "t", |_: &Vec<i32>| true, || Ok(vec![7])).unwrap();
        assert_eq!(s, CacheStatus::Hit);

        let path = cache.path(CacheKind::Table, "t");
        let tampered = fs::read_to_string(&path).unwrap().replace("[7]", "[8]");
        fs::write(&path, tampered).unwrap();
        let (v, s) = cache.load_or_build(CacheKind::Table, "t", |_: &Vec<i32>| true, || Ok(vec![7])).unwrap();
        assert_eq!((v, s), (vec![7], CacheStatus::Rebuilt));

        fs::write(&path, "not json").unwrap();
        let (_, s) = cache.load_or_build(CacheKind::Table, "t", |_: &Vec<i32>| true, || Ok(vec![7])).unwrap();
        assert_eq!(s, CacheStatus::Rebuilt);
    }
}
