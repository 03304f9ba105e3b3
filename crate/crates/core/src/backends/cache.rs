use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One line of the cache file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheRecord {
    pub key: String,
    pub utterance: String,
    pub output: String,
    pub model: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

pub fn cache_key(model: &str, utterance: &str) -> String {
    let mut h = Sha256::new();
    h.update(model.as_bytes());
    h.update([0u8]);
    h.update(utterance.as_bytes());
    hex(&h.finalize())
}

pub(crate) fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Append-only JSON Lines cache of remote extraction replies. Later lines
/// win when a key repeats.
#[derive(Debug)]
pub struct LlmCache {
    path: PathBuf,
    inner: Mutex<Inner>,
}

#[derive(Debug)]
struct Inner {
    entries: HashMap<String, String>,
    file: File,
}

impl LlmCache {
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let mut entries = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (i, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec: CacheRecord = serde_json::from_str(&line).map_err(|e| {
                    std::io::Error::new(std::io::ErrorKind::InvalidData, format!("cache line {}: {e}", i + 1))
                })?;
                entries.insert(rec.key, rec.output);
            }
        }
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(LlmCache { path: path.to_path_buf(), inner: Mutex::new(Inner { entries, file }) })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.inner.lock().unwrap().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, model: &str, utterance: &str) -> Option<String> {
        self.inner.lock().unwrap().entries.get(&cache_key(model, utterance)).cloned()
    }

    pub fn put(&self, model: &str, utterance: &str, output: &str) -> std::io::Result<()> {
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        let rec = CacheRecord {
            key: cache_key(model, utterance),
            utterance: utterance.to_string(),
            output: output.to_string(),
            model: model.to_string(),
            timestamp,
        };
        let line = serde_json::to_string(&rec).expect("record serializes") + "\n";
        let mut inner = self.inner.lock().unwrap();
        inner.file.write_all(line.as_bytes())?;
        inner.file.flush()?;
        inner.entries.insert(rec.key, rec.output);
        Ok(())
    }
}
