//! `key = value` configuration files. Lines starting with `#` are comments.
//! Relative paths are resolved against the directory holding the file.

use std::path::{Path, PathBuf};
use std::time::Duration;

use crate::backends::ExtractorConfig;
use crate::corpus::SearchPolicy;
use crate::embedding::EmbeddingProviderConfig;
use crate::evalkit::DEFAULT_EPSILON;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Paths {
    pub corpus: Option<PathBuf>,
    pub index: Option<PathBuf>,
    pub fixtures: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AppConfig {
    pub extractor: ExtractorConfig,
    pub embedding: EmbeddingProviderConfig,
    pub search: SearchPolicy,
    pub paths: Paths,
    pub epsilon: f64,
    /// Queries compared concurrently.
    pub jobs: usize,
}

impl Default for AppConfig {
    fn default() -> Self {
        AppConfig {
            extractor: ExtractorConfig::default(),
            embedding: EmbeddingProviderConfig::default(),
            search: SearchPolicy::default(),
            paths: Paths::default(),
            epsilon: DEFAULT_EPSILON,
            jobs: 1,
        }
    }
}

pub const KEYS: &[&str] = &[
    "extractor.backend",
    "extractor.endpoint",
    "extractor.model",
    "extractor.timeout_secs",
    "extractor.max_retries",
    "extractor.concurrency",
    "embedding.provider",
    "embedding.native_dim",
    "embedding.target_dim",
    "embedding.endpoint",
    "embedding.model",
    "embedding.seed",
    "embedding.timeout_secs",
    "embedding.max_retries",
    "embedding.concurrency",
    "embedding.batch_size",
    "search.mode",
    "search.k",
    "search.min_similarity",
    "paths.corpus",
    "paths.index",
    "paths.fixtures",
    "paths.cache",
    "paths.output",
    "epsilon",
    "jobs",
];

impl AppConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let mut cfg = AppConfig::default();
        cfg.apply_text(&text, base).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(cfg)
    }

    /// Applies every assignment in `text` on top of the current values.
    pub fn apply_text(&mut self, text: &str, base: &Path) -> Result<(), String> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| format!("line {}: expected `key = value`", i + 1))?;
            self.set(key.trim(), value.trim(), base).map_err(|e| format!("line {}: {e}", i + 1))?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), String> {
        let path = || Some(base.join(value));
        match key {
            "extractor.backend" => self.extractor.backend = value.parse()?,
            "extractor.endpoint" => self.extractor.endpoint_url = value.to_string(),
            "extractor.model" => self.extractor.model_name = value.to_string(),
            "extractor.timeout_secs" => self.extractor.timeout = secs(value)?,
            "extractor.max_retries" => self.extractor.max_retries = num(key, value)?,
            "extractor.concurrency" => self.extractor.concurrency = num(key, value)?,
            "embedding.provider" => self.embedding.provider = value.parse()?,
            "embedding.native_dim" => self.embedding.native_dim = num(key, value)?,
            "embedding.target_dim" => self.embedding.target_dim = num(key, value)?,
            "embedding.endpoint" => self.embedding.endpoint_url = value.to_string(),
            "embedding.model" => self.embedding.model_name = value.to_string(),
            "embedding.seed" => self.embedding.seed = num(key, value)?,
            "embedding.timeout_secs" => self.embedding.timeout = secs(value)?,
            "embedding.max_retries" => self.embedding.max_retries = num(key, value)?,
            "embedding.concurrency" => self.embedding.concurrency = num(key, value)?,
            "embedding.batch_size" => self.embedding.batch_size = num(key, value)?,
            "search.mode" => self.search.mode = value.parse()?,
            "search.k" => self.search.k = num(key, value)?,
            "search.min_similarity" => self.search.min_similarity = num(key, value)?,
            "paths.corpus" => self.paths.corpus = path(),
            "paths.index" => self.paths.index = path(),
            "paths.fixtures" => self.paths.fixtures = path(),
            "paths.cache" => self.paths.cache = path(),
            "paths.output" => self.paths.output = path(),
            "epsilon" => self.epsilon = num(key, value)?,
            "jobs" => self.jobs = num(key, value)?,
            other => return Err(format!("unknown key `{other}`")),
        }
        Ok(())
    }
}

fn num<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, String> {
    value.parse().map_err(|_| format!("invalid value `{value}` for `{key}`"))
}

fn secs(value: &str) -> Result<Duration, String> {
    let s: f64 = num("timeout_secs", value)?;
    if !(s > 0.0 && s.is_finite()) {
        return Err("timeout must be positive".into());
    }
    Ok(Duration::from_secs_f64(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backends::BackendKind;
    use crate::corpus::SearchMode;

    #[test]
    fn parses_every_key() {
        let mut cfg = AppConfig::default();
        let text = "# demo\n\
            extractor.backend = llm\nextractor.model = m\nextractor.timeout_secs = 2.5\n\
            embedding.target_dim = 64\nembedding.seed = 9\n\
            search.mode = topk\nsearch.k = 5\n\
            paths.index = out/ix.bin\nepsilon = 0.01\njobs = 3\n";
        cfg.apply_text(text, Path::new("/base")).unwrap();
        assert_eq!(cfg.extractor.backend, BackendKind::RemoteLlm);
        assert_eq!(cfg.extractor.timeout, Duration::from_millis(2500));
        assert_eq!(cfg.embedding.target_dim, 64);
        assert_eq!(cfg.search.mode, SearchMode::TopK);
        assert_eq!(cfg.paths.index, Some(PathBuf::from("/base/out/ix.bin")));
        assert_eq!((cfg.epsilon, cfg.jobs), (0.01, 3));
    }

    #[test]
    fn every_listed_key_is_accepted() {
        let samples = [("backend", "rule"), ("provider", "local"), ("mode", "both")];
        for key in KEYS {
            let mut cfg = AppConfig::default();
            let suffix = key.rsplit('.').next().unwrap();
            let value = samples.iter().find(|(k, _)| *k == suffix).map_or("1", |(_, v)| v);
            cfg.set(key, value, Path::new("")).unwrap_or_else(|e| panic!("{key}: {e}"));
        }
    }

    #[test]
    fn errors_name_the_line() {
        let mut cfg = AppConfig::default();
        assert_eq!(cfg.apply_text("\nbogus = 1\n", Path::new("")).unwrap_err(), "line 2: unknown key `bogus`");
        assert!(cfg.apply_text("search.k = many", Path::new("")).unwrap_err().starts_with("line 1: invalid value"));
        assert!(cfg.apply_text("no equals sign", Path::new("")).is_err());
        assert!(cfg.apply_text("extractor.timeout_secs = 0", Path::new("")).is_err());
    }
}
