//! Unit-norm text embeddings, prefix truncation and cosine similarity.
//!
//! Two providers are available. [`ProviderKind::DeterministicLocal`] is an
//! offline signed-hash bag-of-words projection; [`ProviderKind::Remote`]
//! calls an embeddings HTTP endpoint and truncates its native vectors.

mod local;
mod remote;

use std::sync::Arc;
use std::time::Duration;

use thiserror::Error;

use crate::transport::{HttpTransport, Transport};

pub use local::HashEmbedder;

pub const EMBEDDING_KEY_ENV: &str = "PROPSHIFT_EMBEDDING_API_KEY";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbeddingError {
    #[error("text is empty")]
    EmptyText,
    #[error("vector prefix is all zeros")]
    DegenerateVector,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid embedding config: {0}")]
    InvalidConfig(String),
    #[error("no embedding API key; set {EMBEDDING_KEY_ENV}")]
    AuthMissing,
    #[error("embedding request timed out")]
    Timeout,
    #[error("embedding service error: {0}")]
    Service(String),
    #[error("malformed embedding response: {0}")]
    MalformedResponse(String),
}

impl EmbeddingError {
    /// True for failures caused by the remote service rather than the input.
    pub fn is_external(&self) -> bool {
        matches!(
            self,
            EmbeddingError::AuthMissing
                | EmbeddingError::Timeout
                | EmbeddingError::Service(_)
                | EmbeddingError::MalformedResponse(_)
        )
    }
}

/// A unit-norm vector stored as `f32`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    values: Vec<f32>,
}

impl EmbeddingVector {
    /// Normalizes `values` to unit length.
    pub fn normalized<T: Copy + Into<f64>>(values: &[T]) -> Result<Self, EmbeddingError> {
        truncate_renormalize(values, values.len())
    }

    /// Wraps values that are already unit-norm (as read back from an index).
    pub(crate) fn from_stored(values: Vec<f32>) -> Self {
        EmbeddingVector { values }
    }

    pub fn values(&self) -> &[f32] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        dot(&self.values, &self.values).sqrt()
    }
}

/// Keeps the first `d` components and rescales them to unit length.
pub fn truncate_renormalize<T: Copy + Into<f64>>(v: &[T], d: usize) -> Result<EmbeddingVector, EmbeddingError> {
    if d == 0 || d > v.len() {
        return Err(EmbeddingError::DimensionMismatch { expected: d, found: v.len() });
    }
    let prefix: Vec<f64> = v[..d].iter().map(|&x| x.into()).collect();
    let norm = prefix.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(EmbeddingError::DegenerateVector);
    }
    Ok(EmbeddingVector { values: prefix.iter().map(|x| (x / norm) as f32).collect() })
}

/// Cosine similarity, accumulated in `f64`.
pub fn cosine(a: &EmbeddingVector, b: &EmbeddingVector) -> Result<f64, EmbeddingError> {
    if a.dim() != b.dim() {
        return Err(EmbeddingError::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    Ok(cosine_raw(&a.values, &b.values))
}

pub(crate) fn cosine_raw(a: &[f32], b: &[f32]) -> f64 {
    let denom = (dot(a, a) * dot(b, b)).sqrt();
    if denom == 0.0 {
        return 0.0;
    }
    (dot(a, b) / denom).clamp(-1.0, 1.0)
}

pub(crate) fn dot(a: &[f32], b: &[f32]) -> f64 {
    a.iter().zip(b).map(|(&x, &y)| x as f64 * y as f64).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProviderKind {
    Remote,
    DeterministicLocal,
}

impl std::str::FromStr for ProviderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "remote" => Ok(ProviderKind::Remote),
            "local" | "deterministic-local" | "deterministiclocal" => Ok(ProviderKind::DeterministicLocal),
            other => Err(format!("unknown embedding provider `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingProviderConfig {
    pub provider: ProviderKind,
    pub native_dim: usize,
    pub target_dim: usize,
    pub endpoint_url: String,
    pub model_name: String,
    pub seed: u64,
    pub timeout: Duration,
    pub max_retries: u32,
    /// Maximum in-flight remote requests.
    pub concurrency: usize,
    /// Texts per remote request.
    pub batch_size: usize,
    /// Overrides the environment variable when set.
    pub api_key: Option<String>,
}

impl Default for EmbeddingProviderConfig {
    fn default() -> Self {
        EmbeddingProviderConfig {
            provider: ProviderKind::DeterministicLocal,
            native_dim: 3072,
            target_dim: 256,
            endpoint_url: "https://api.openai.com/v1/embeddings".into(),
            model_name: "text-embedding-3-large".into(),
            seed: 0,
            timeout: Duration::from_secs(30),
            max_retries: 3,
            concurrency: 8,
            batch_size: 64,
            api_key: None,
        }
    }
}

impl EmbeddingProviderConfig {
    pub fn local(native_dim: usize, target_dim: usize, seed: u64) -> Self {
        EmbeddingProviderConfig { native_dim, target_dim, seed, ..Default::default() }
    }

    pub fn validate(&self) -> Result<(), EmbeddingError> {
        if self.native_dim == 0 || self.target_dim == 0 {
            return Err(EmbeddingError::InvalidConfig("dimensions must be positive".into()));
        }
        if self.target_dim > self.native_dim {
            return Err(EmbeddingError::InvalidConfig(format!(
                "target_dim {} exceeds native_dim {}",
                self.target_dim, self.native_dim
            )));
        }
        if self.timeout.is_zero() {
            return Err(EmbeddingError::InvalidConfig("timeout must be positive".into()));
        }
        if self.batch_size == 0 {
            return Err(EmbeddingError::InvalidConfig("batch_size must be positive".into()));
        }
        Ok(())
    }
}

/// Embeds text with the configured provider.
pub struct Embedder {
    target_dim: usize,
    backend: Backend,
}

enum Backend {
    Local(HashEmbedder),
    Remote(remote::RemoteEmbedder),
}

impl Embedder {
    pub fn new(cfg: &EmbeddingProviderConfig) -> Result<Self, EmbeddingError> {
        let transport = Arc::new(HttpTransport::new(cfg.timeout));
        Self::with_transport(cfg, transport)
    }

    /// Like [`Embedder::new`] but sends remote requests through `transport`.
    pub fn with_transport(
        cfg: &EmbeddingProviderConfig,
        transport: Arc<dyn Transport>,
    ) -> Result<Self, EmbeddingError> {
        cfg.validate()?;
        let backend = match cfg.provider {
            ProviderKind::DeterministicLocal => Backend::Local(HashEmbedder::new(cfg.native_dim, cfg.seed)),
            ProviderKind::Remote => Backend::Remote(remote::RemoteEmbedder::new(cfg, transport)?),
        };
        Ok(Embedder { target_dim: cfg.target_dim, backend })
    }

    pub fn dim(&self) -> usize {
        self.target_dim
    }

    /// Useful number of parallel callers: 1 for the local provider, the
    /// in-flight limit for the remote one.
    pub fn parallelism(&self) -> usize {
        match &self.backend {
            Backend::Local(_) => 1,
            Backend::Remote(r) => r.concurrency(),
        }
    }

    pub fn embed(&self, text: &str) -> Result<EmbeddingVector, EmbeddingError> {
        Ok(self.embed_batch(&[text])?.remove(0))
    }

    /// Embeds several texts; output order follows input order.
    pub fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        if texts.iter().any(|t| t.trim().is_empty()) {
            return Err(EmbeddingError::EmptyText);
        }
        match &self.backend {
            Backend::Local(h) => texts.iter().map(|t| h.embed(t, self.target_dim)).collect(),
            Backend::Remote(r) => r.embed_batch(texts),
        }
    }
}

/// One-shot convenience wrapper around [`Embedder`].
pub fn embed(cfg: &EmbeddingProviderConfig, text: &str) -> Result<EmbeddingVector, EmbeddingError> {
    Embedder::new(cfg)?.embed(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f32], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (*x as f64 - y).abs() < 1e-6)
    }

    #[test]
    fn truncate_unit_prefix() {
        let v = truncate_renormalize(&[0.6f64, 0.8, 0.0, 0.0], 2).unwrap();
        assert!(close(v.values(), &[0.6, 0.8]));
    }

    #[test]
    fn truncate_rescales() {
        let v = truncate_renormalize(&[0.5f64; 4], 2).unwrap();
        let h = 1.0 / 2f64.sqrt();
        assert!(close(v.values(), &[h, h]));
    }

    #[test]
    fn truncate_zero_prefix_is_degenerate() {
        assert_eq!(truncate_renormalize(&[0.0f64, 0.0, 1.0], 2), Err(EmbeddingError::DegenerateVector));
    }

    #[test]
    fn truncate_rejects_bad_dim() {
        assert!(matches!(truncate_renormalize(&[1.0f64], 2), Err(EmbeddingError::DimensionMismatch { .. })));
        assert!(truncate_renormalize(&[1.0f64], 0).is_err());
    }

    #[test]
    fn cosine_basics() {
        let a = EmbeddingVector::normalized(&[1.0f64, 0.0]).unwrap();
        let b = EmbeddingVector::normalized(&[0.0f64, 1.0]).unwrap();
        assert_eq!(cosine(&a, &b).unwrap(), 0.0);
        assert!((cosine(&a, &a).unwrap() - 1.0).abs() < 1e-12);
        let c = EmbeddingVector::normalized(&[1.0f64, 0.0, 0.0]).unwrap();
        assert!(matches!(cosine(&a, &c), Err(EmbeddingError::DimensionMismatch { .. })));
    }

    #[test]
    fn config_validation() {
        let mut cfg = EmbeddingProviderConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.target_dim = cfg.native_dim + 1;
        assert!(Embedder::new(&cfg).is_err());
    }

    #[test]
    fn empty_text_rejected() {
        let e = Embedder::new(&EmbeddingProviderConfig::local(64, 16, 1)).unwrap();
        assert_eq!(e.embed("  "), Err(EmbeddingError::EmptyText));
        assert_eq!(e.embed("?!"), Err(EmbeddingError::DegenerateVector));
    }

    #[test]
    fn provider_kind_parses() {
        assert_eq!("local".parse::<ProviderKind>(), Ok(ProviderKind::DeterministicLocal));
        assert_eq!("Remote".parse::<ProviderKind>(), Ok(ProviderKind::Remote));
        assert!("x".parse::<ProviderKind>().is_err());
    }
}
