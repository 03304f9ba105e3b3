use std::sync::Arc;
use std::time::Duration;

use serde_json::{json, Value};

use super::{truncate_renormalize, EmbeddingError, EmbeddingProviderConfig, EmbeddingVector, EMBEDDING_KEY_ENV};
use crate::pool::{bounded_map, Semaphore};
use crate::transport::{post_with_retries, RetryPolicy, Transport, TransportError};

pub(super) struct RemoteEmbedder {
    transport: Arc<dyn Transport>,
    endpoint: String,
    model: String,
    api_key: String,
    native_dim: usize,
    target_dim: usize,
    retry: RetryPolicy,
    concurrency: usize,
    in_flight: Semaphore,
    batch_size: usize,
}

impl RemoteEmbedder {
    pub(super) fn new(cfg: &EmbeddingProviderConfig, transport: Arc<dyn Transport>) -> Result<Self, EmbeddingError> {
        let api_key = cfg
            .api_key
            .clone()
            .or_else(|| std::env::var(EMBEDDING_KEY_ENV).ok())
            .filter(|k| !k.trim().is_empty())
            .ok_or(EmbeddingError::AuthMissing)?;
        Ok(RemoteEmbedder {
            transport,
            endpoint: cfg.endpoint_url.clone(),
            model: cfg.model_name.clone(),
            api_key,
            native_dim: cfg.native_dim,
            target_dim: cfg.target_dim,
            retry: RetryPolicy { max_retries: cfg.max_retries, backoff: Duration::from_millis(250) },
            concurrency: cfg.concurrency,
            in_flight: Semaphore::new(cfg.concurrency),
            batch_size: cfg.batch_size,
        })
    }

    pub(super) fn concurrency(&self) -> usize {
        self.concurrency.max(1)
    }

    pub(super) fn embed_batch(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        let batches: Vec<&[&str]> = texts.chunks(self.batch_size).collect();
        let results = bounded_map(&batches, self.concurrency, |b| self.request(b));
        let mut out = Vec::with_capacity(texts.len());
        for r in results {
            out.extend(r?);
        }
        Ok(out)
    }

    fn request(&self, texts: &[&str]) -> Result<Vec<EmbeddingVector>, EmbeddingError> {
        let body = json!({ "model": self.model, "input": texts });
        let reply = self
            .in_flight
            .run(|| post_with_retries(self.transport.as_ref(), &self.endpoint, &self.api_key, &body, self.retry))
            .map_err(|e| match e {
                TransportError::Timeout => EmbeddingError::Timeout,
                TransportError::Decode(m) => EmbeddingError::MalformedResponse(m),
                other => EmbeddingError::Service(other.to_string()),
            })?;
        let data = reply
            .get("data")
            .and_then(Value::as_array)
            .ok_or_else(|| EmbeddingError::MalformedResponse("missing `data` array".into()))?;
        if data.len() != texts.len() {
            return Err(EmbeddingError::MalformedResponse(format!(
                "expected {} embeddings, got {}",
                texts.len(),
                data.len()
            )));
        }
        data.iter()
            .map(|item| {
                let values: Vec<f64> = item
                    .get("embedding")
                    .and_then(Value::as_array)
                    .ok_or_else(|| EmbeddingError::MalformedResponse("missing `embedding`".into()))?
                    .iter()
                    .map(|x| {
                        x.as_f64().ok_or_else(|| EmbeddingError::MalformedResponse("non-numeric component".into()))
                    })
                    .collect::<Result<_, _>>()?;
                if values.len() != self.native_dim {
                    return Err(EmbeddingError::DimensionMismatch { expected: self.native_dim, found: values.len() });
                }
                truncate_renormalize(&values, self.target_dim)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{Embedder, ProviderKind};
    use std::sync::Mutex;

    struct Fake {
        seen: Mutex<Vec<Value>>,
        reply: fn(&Value) -> Result<Value, TransportError>,
    }

    impl Transport for Fake {
        fn post_json(&self, _: &str, key: &str, body: &Value) -> Result<Value, TransportError> {
            assert_eq!(key, "k");
            self.seen.lock().unwrap().push(body.clone());
            (self.reply)(body)
        }
    }

    fn cfg() -> EmbeddingProviderConfig {
        EmbeddingProviderConfig {
            provider: ProviderKind::Remote,
            native_dim: 4,
            target_dim: 2,
            api_key: Some("k".into()),
            batch_size: 2,
            max_retries: 0,
            ..Default::default()
        }
    }

    fn echo(body: &Value) -> Result<Value, TransportError> {
        let n = body["input"].as_array().unwrap().len();
        let data: Vec<Value> = (0..n).map(|i| json!({ "embedding": [3.0, 4.0, i as f64, 9.0] })).collect();
        Ok(json!({ "data": data }))
    }

    #[test]
    fn batches_and_truncates() {
        let fake = Arc::new(Fake { seen: Mutex::new(vec![]), reply: echo });
        let e = Embedder::with_transport(&cfg(), fake.clone()).unwrap();
        let out = e.embed_batch(&["a", "b", "c"]).unwrap();
        assert_eq!(out.len(), 3);
        assert_eq!(out[0].values(), &[0.6, 0.8]);
        let seen = fake.seen.lock().unwrap();
        assert_eq!(seen.len(), 2);
        assert!(seen.iter().all(|b| b["model"] == "text-embedding-3-large"));
    }

    #[test]
    fn wrong_native_dim_is_reported() {
        let fake = Arc::new(Fake {
            seen: Mutex::new(vec![]),
            reply: |_| Ok(json!({ "data": [{ "embedding": [1.0, 2.0] }] })),
        });
        let e = Embedder::with_transport(&cfg(), fake).unwrap();
        assert_eq!(e.embed("a"), Err(EmbeddingError::DimensionMismatch { expected: 4, found: 2 }));
    }

    #[test]
    fn timeout_maps_through() {
        let fake = Arc::new(Fake { seen: Mutex::new(vec![]), reply: |_| Err(TransportError::Timeout) });
        let e = Embedder::with_transport(&cfg(), fake).unwrap();
        assert_eq!(e.embed("a"), Err(EmbeddingError::Timeout));
    }

    #[test]
    fn missing_data_is_malformed() {
        let fake = Arc::new(Fake { seen: Mutex::new(vec![]), reply: |_| Ok(json!({})) });
        let e = Embedder::with_transport(&cfg(), fake).unwrap();
        assert!(matches!(e.embed("a"), Err(EmbeddingError::MalformedResponse(_))));
    }
}
