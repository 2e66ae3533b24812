//! On-disk cache of wall enumerations, one canonical JSON file per key.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use cswalls_core::{BNModel, NumClass, Wall, Window};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub class: NumClass,
    pub genus: u32,
    pub window: Window,
    pub rank_bound: u32,
    pub model: String,
    pub prune: bool,
    pub version: String,
}

impl CacheKey {
    pub fn new(class: &NumClass, genus: u32, window: &Window, rank_bound: u32, model: &BNModel, prune: bool) -> CacheKey {
        CacheKey {
            class: class.clone(),
            genus,
            window: window.clone(),
            rank_bound,
            model: model_fingerprint(model),
            prune,
            version: TOOL_VERSION.to_string(),
        }
    }

    fn digest(&self) -> String {
        let text = serde_json::to_string(self).expect("cache keys serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}

/// SHA-256 of the model's canonical JSON.
pub fn model_fingerprint(model: &BNModel) -> String {
    let text = serde_json::to_string(model).expect("models serialize");
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: CacheKey,
    walls: Vec<Wall>,
}

pub struct WallCache {
    dir: PathBuf,
}

impl WallCache {
    pub fn new(dir: impl Into<PathBuf>) -> WallCache {
        WallCache { dir: dir.into() }
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        self.dir.join(format!("{}.json", key.digest()))
    }

    /// The stored walls, or `None` for a missing, unreadable, corrupt, or mismatched entry.
    pub fn load(&self, key: &CacheKey) -> Option<Vec<Wall>> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        (entry.key == *key).then_some(entry.walls)
    }

    /// Writes through a temporary file in the same directory, then renames it into place.
    pub fn store(&self, key: &CacheKey, walls: &[Wall]) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)?;
        let entry = Entry { key: key.clone(), walls: walls.to_vec() };
        let text = serde_json::to_string(&entry).map_err(|e| CliError::Io(e.to_string()))?;
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(text.as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(self.path(key)).map_err(|e| CliError::Io(e.error.to_string()))?;
        Ok(())
    }
}
