//! JSON-over-HTTP transport shared by the remote extraction and embedding
//! clients. The trait exists so tests can count or fake network calls.

use std::time::Duration;

use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransportError {
    #[error("request timed out")]
    Timeout,
    #[error("service returned HTTP {code}: {body}")]
    Status { code: u16, body: String },
    #[error("connection failed: {0}")]
    Connection(String),
    #[error("response is not valid JSON: {0}")]
    Decode(String),
}

impl TransportError {
    pub fn is_retryable(&self) -> bool {
        match self {
            TransportError::Timeout | TransportError::Connection(_) => true,
            TransportError::Status { code, .. } => *code == 429 || *code >= 500,
            TransportError::Decode(_) => false,
        }
    }
}

pub trait Transport: Send + Sync {
    /// POSTs `body` to `url` with a bearer token and returns the decoded reply.
    fn post_json(&self, url: &str, api_key: &str, body: &Value) -> Result<Value, TransportError>;
}

/// Blocking HTTP transport.
#[derive(Debug, Clone)]
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Self {
        let agent =
            ureq::Agent::config_builder().timeout_global(Some(timeout)).http_status_as_error(false).build().into();
        HttpTransport { agent }
    }
}

impl Transport for HttpTransport {
    fn post_json(&self, url: &str, api_key: &str, body: &Value) -> Result<Value, TransportError> {
        let mut resp = self
            .agent
            .post(url)
            .header("Authorization", &format!("Bearer {api_key}"))
            .send_json(body)
            .map_err(map_ureq_error)?;
        let code = resp.status().as_u16();
        let text = resp.body_mut().read_to_string().map_err(map_ureq_error)?;
        if !(200..300).contains(&code) {
            return Err(TransportError::Status { code, body: text });
        }
        serde_json::from_str(&text).map_err(|e| TransportError::Decode(e.to_string()))
    }
}

fn map_ureq_error(e: ureq::Error) -> TransportError {
    match e {
        ureq::Error::Timeout(_) => TransportError::Timeout,
        ureq::Error::Io(io) if matches!(io.kind(), std::io::ErrorKind::TimedOut | std::io::ErrorKind::WouldBlock) => {
            TransportError::Timeout
        }
        ureq::Error::StatusCode(code) => TransportError::Status { code, body: String::new() },
        other => TransportError::Connection(other.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_retries: u32,
    /// Delay before the first retry; doubles on each further attempt.
    pub backoff: Duration,
}

pub fn post_with_retries(
    transport: &dyn Transport,
    url: &str,
    api_key: &str,
    body: &Value,
    policy: RetryPolicy,
) -> Result<Value, TransportError> {
    let mut attempt = 0;
    loop {
        match transport.post_json(url, api_key, body) {
            Err(e) if e.is_retryable() && attempt < policy.max_retries => {
                std::thread::sleep(policy.backoff * 2u32.saturating_pow(attempt));
                attempt += 1;
            }
            other => return other,
        }
    }
}
