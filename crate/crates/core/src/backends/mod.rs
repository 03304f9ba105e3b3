//! A single extraction entry point over two backends: the deterministic rule
//! engine and a remote chat-completions model driven by a fixed system
//! prompt. Remote replies are cached on disk.

mod cache;

use std::path::PathBuf;
use std::sync::Arc;
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::pool::{bounded_map, Semaphore};
use crate::speechact::{
    classify_text, extract_rule_with, normalize_text, proposition_violation, ExtractionTrace, IfidLexicon, Proposition,
    Transform, Utterance,
};
use crate::transport::{post_with_retries, HttpTransport, RetryPolicy, Transport, TransportError};

pub use cache::{cache_key, CacheRecord, LlmCache};

pub const LLM_KEY_ENV: &str = "PROPSHIFT_LLM_API_KEY";

const SYSTEM_PROMPT: &str = include_str!("../../data/system_prompt.txt");

/// The system prompt sent with every remote extraction request.
pub fn build_system_prompt() -> &'static str {
    SYSTEM_PROMPT
}

/// SHA-256 of the system prompt, hex encoded.
pub fn system_prompt_checksum() -> String {
    cache::hex(&Sha256::digest(SYSTEM_PROMPT.as_bytes()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendKind {
    Rule,
    RemoteLlm,
}

impl std::str::FromStr for BackendKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rule" => Ok(BackendKind::Rule),
            "llm" | "remote" | "remote-llm" => Ok(BackendKind::RemoteLlm),
            other => Err(format!("unknown extraction backend `{other}` (expected rule or llm)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtractorConfig {
    pub backend: BackendKind,
    pub endpoint_url: String,
    pub model_name: String,
    pub timeout: Duration,
    pub max_retries: u32,
    pub cache_path: Option<PathBuf>,
    /// Maximum in-flight remote requests.
    pub concurrency: usize,
    /// Overrides the environment variable when set.
    pub api_key: Option<String>,
}

impl Default for ExtractorConfig {
    fn default() -> Self {
        ExtractorConfig {
            backend: BackendKind::Rule,
            endpoint_url: "https://api.openai.com/v1/chat/completions".into(),
            model_name: "gpt-4".into(),
            timeout: Duration::from_secs(60),
            max_retries: 3,
            cache_path: None,
            concurrency: 4,
            api_key: None,
        }
    }
}

impl ExtractorConfig {
    pub fn validate(&self) -> Result<(), ExtractError> {
        if self.timeout.is_zero() {
            return Err(ExtractError::InvalidConfig("timeout must be positive".into()));
        }
        if self.backend == BackendKind::RemoteLlm && self.model_name.trim().is_empty() {
            return Err(ExtractError::InvalidConfig("model_name is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("invalid extractor config: {0}")]
    InvalidConfig(String),
    #[error("no language model API key; set {LLM_KEY_ENV}")]
    AuthMissing,
    #[error("language model request timed out")]
    Timeout,
    #[error("malformed language model response: {0}")]
    MalformedResponse(String),
    #[error("language model service error: {0}")]
    Service(String),
    #[error("extraction cache {path}: {source}")]
    Cache { path: PathBuf, source: std::io::Error },
}

impl ExtractError {
    /// True for failures caused by the remote service rather than the input.
    pub fn is_external(&self) -> bool {
        matches!(
            self,
            ExtractError::AuthMissing
                | ExtractError::Timeout
                | ExtractError::MalformedResponse(_)
                | ExtractError::Service(_)
        )
    }
}

/// Extracts propositions with the configured backend.
pub struct Extractor {
    lexicon: &'static IfidLexicon,
    concurrency: usize,
    remote: Option<Remote>,
}

struct Remote {
    transport: Arc<dyn Transport>,
    endpoint: String,
    model: String,
    api_key: String,
    retry: RetryPolicy,
    in_flight: Semaphore,
    cache: Option<LlmCache>,
}

impl Extractor {
    pub fn new(cfg: &ExtractorConfig) -> Result<Self, ExtractError> {
        Self::with_transport(cfg, Arc::new(HttpTransport::new(cfg.timeout)))
    }

    /// Like [`Extractor::new`] but sends remote requests through `transport`.
    pub fn with_transport(cfg: &ExtractorConfig, transport: Arc<dyn Transport>) -> Result<Self, ExtractError> {
        cfg.validate()?;
        let remote = match cfg.backend {
            BackendKind::Rule => None,
            BackendKind::RemoteLlm => {
                let api_key = cfg
                    .api_key
                    .clone()
                    .or_else(|| std::env::var(LLM_KEY_ENV).ok())
                    .filter(|k| !k.trim().is_empty())
                    .ok_or(ExtractError::AuthMissing)?;
                let cache = match &cfg.cache_path {
                    Some(p) => {
                        Some(LlmCache::open(p).map_err(|source| ExtractError::Cache { path: p.clone(), source })?)
                    }
                    None => None,
                };
                Some(Remote {
                    transport,
                    endpoint: cfg.endpoint_url.clone(),
                    model: cfg.model_name.clone(),
                    api_key,
                    retry: RetryPolicy { max_retries: cfg.max_retries, backoff: Duration::from_millis(500) },
                    in_flight: Semaphore::new(cfg.concurrency),
                    cache,
                })
            }
        };
        Ok(Extractor { lexicon: IfidLexicon::bundled(), concurrency: cfg.concurrency.max(1), remote })
    }

    pub fn extract(&self, u: &Utterance) -> Result<Proposition, ExtractError> {
        match &self.remote {
            None => Ok(extract_rule_with(self.lexicon, u)),
            Some(r) => r.extract(self.lexicon, u),
        }
    }

    /// Extracts every utterance, running remote requests concurrently.
    /// Results follow input order.
    pub fn extract_many(&self, us: &[Utterance]) -> Vec<Result<Proposition, ExtractError>> {
        let limit = if self.remote.is_some() { self.concurrency } else { 1 };
        bounded_map(us, limit, |u| self.extract(u))
    }
}

/// One-shot convenience wrapper around [`Extractor`].
pub fn extract(cfg: &ExtractorConfig, u: &Utterance) -> Result<Proposition, ExtractError> {
    Extractor::new(cfg)?.extract(u)
}

impl Remote {
    fn extract(&self, lex: &IfidLexicon, u: &Utterance) -> Result<Proposition, ExtractError> {
        let utterance = u.normalized();
        let reply = match self.cache.as_ref().and_then(|c| c.get(&self.model, utterance)) {
            Some(hit) => hit,
            None => {
                let reply = self.request(utterance)?;
                if let Some(c) = &self.cache {
                    c.put(&self.model, utterance, &reply)
                        .map_err(|source| ExtractError::Cache { path: c.path().to_path_buf(), source })?;
                }
                reply
            }
        };
        Ok(sanitize(lex, u, &reply))
    }

    fn request(&self, utterance: &str) -> Result<String, ExtractError> {
        let body = json!({
            "model": self.model,
            "temperature": 0,
            "messages": [
                { "role": "system", "content": SYSTEM_PROMPT },
                { "role": "user", "content": utterance },
            ],
        });
        let reply = self
            .in_flight
            .run(|| post_with_retries(self.transport.as_ref(), &self.endpoint, &self.api_key, &body, self.retry))
            .map_err(|e| match e {
                TransportError::Timeout => ExtractError::Timeout,
                TransportError::Decode(m) => ExtractError::MalformedResponse(m),
                other => ExtractError::Service(other.to_string()),
            })?;
        reply_text(&reply)
    }
}

/// Pulls the single assistant message out of a chat-completions reply and
/// strips surrounding whitespace and quotes.
fn reply_text(reply: &Value) -> Result<String, ExtractError> {
    let choices = reply
        .get("choices")
        .and_then(Value::as_array)
        .ok_or_else(|| ExtractError::MalformedResponse("missing `choices`".into()))?;
    if choices.len() != 1 {
        return Err(ExtractError::MalformedResponse(format!("expected one choice, got {}", choices.len())));
    }
    let content = choices[0]
        .pointer("/message/content")
        .and_then(Value::as_str)
        .ok_or_else(|| ExtractError::MalformedResponse("choice has no text content".into()))?;
    let text = strip_quotes(content.trim());
    if text.is_empty() {
        return Err(ExtractError::MalformedResponse("empty reply".into()));
    }
    Ok(text.to_string())
}

fn strip_quotes(mut s: &str) -> &str {
    const PAIRS: [(char, char); 5] =
        [('"', '"'), ('\'', '\''), ('`', '`'), ('\u{201c}', '\u{201d}'), ('\u{2018}', '\u{2019}')];
    loop {
        let Some(&(open, close)) = PAIRS.iter().find(|(o, c)| s.starts_with(*o) && s.ends_with(*c) && s.len() > 1)
        else {
            return s;
        };
        s = s[open.len_utf8()..s.len() - close.len_utf8()].trim();
    }
}

/// Normalizes a remote reply and repairs anything that would break the
/// proposition invariants.
fn sanitize(lex: &IfidLexicon, u: &Utterance, reply: &str) -> Proposition {
    let mut trace = ExtractionTrace::default();
    trace.push(Transform::RemoteLlm);
    let mut text = normalize_text(reply);
    if text.contains('?') {
        text = text.trim_end_matches('?').replace('?', "");
        if !text.ends_with(['.', '!']) {
            text.push('.');
        }
        trace.push(Transform::StripQuestionMark);
    }
    if proposition_violation(lex, &text).is_some() {
        if let Ok(again) = Utterance::new(text.clone()) {
            let p = extract_rule_with(lex, &again);
            trace.matched_frames.extend(p.trace.matched_frames);
            trace.transforms_applied.extend(p.trace.transforms_applied);
            text = p.text;
        }
    }
    Proposition { text, source_category: classify_text(lex, u.normalized()), trace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::speechact::{extract_rule, SpeechActLabel};
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Mutex;

    #[test]
    fn prompt_is_stable() {
        let p = build_system_prompt();
        assert!(p.starts_with("You are an assistant specialized in extracting propositional content"));
        assert!(p.contains("7. Declaratives:"));
        assert!(p.ends_with("Do NOT include explanations or additional text."));
        assert_eq!(system_prompt_checksum(), "c79d5e32d57207b4d1269334ed4c9beb37cfcd866647ad7ef01df33020e11c48");
    }

    #[test]
    fn rule_backend_delegates() {
        let u = Utterance::new("Has TelComp challenged the charging of TPU fees in other municipalities?").unwrap();
        let ex = Extractor::new(&ExtractorConfig::default()).unwrap();
        assert_eq!(ex.extract(&u).unwrap(), extract_rule(&u));
    }

    struct Canned {
        calls: AtomicUsize,
        bodies: Mutex<Vec<Value>>,
        content: Value,
    }

    impl Canned {
        fn new(content: Value) -> Arc<Self> {
            Arc::new(Canned { calls: AtomicUsize::new(0), bodies: Mutex::new(vec![]), content })
        }
    }

    impl Transport for Canned {
        fn post_json(&self, _: &str, _: &str, body: &Value) -> Result<Value, TransportError> {
            self.calls.fetch_add(1, Ordering::SeqCst);
            self.bodies.lock().unwrap().push(body.clone());
            Ok(self.content.clone())
        }
    }

    fn chat(text: &str) -> Value {
        json!({ "choices": [{ "message": { "role": "assistant", "content": text } }] })
    }

    fn llm_cfg() -> ExtractorConfig {
        ExtractorConfig {
            backend: BackendKind::RemoteLlm,
            api_key: Some("k".into()),
            max_retries: 0,
            ..Default::default()
        }
    }

    #[test]
    fn request_shape() {
        let t = Canned::new(chat("X."));
        let ex = Extractor::with_transport(&llm_cfg(), t.clone()).unwrap();
        let p = ex.extract(&Utterance::new("Is X?").unwrap()).unwrap();
        assert_eq!(p.text, "X.");
        assert_eq!(p.source_category, SpeechActLabel::Interrogative);
        let body = &t.bodies.lock().unwrap()[0];
        assert_eq!(body["temperature"], 0);
        assert_eq!(body["messages"][0]["role"], "system");
        assert_eq!(body["messages"][0]["content"], build_system_prompt());
        assert_eq!(body["messages"][1]["content"], "Is X?");
    }

    #[test]
    fn reply_errors() {
        for bad in [chat(""), chat("  \"\" "), json!({ "choices": [] }), json!({})] {
            let ex = Extractor::with_transport(&llm_cfg(), Canned::new(bad.clone())).unwrap();
            let err = ex.extract(&Utterance::new("Is X?").unwrap()).unwrap_err();
            assert!(matches!(err, ExtractError::MalformedResponse(_)), "{bad}");
        }
        let two = json!({ "choices": [{ "message": { "content": "a" } }, { "message": { "content": "b" } }] });
        let ex = Extractor::with_transport(&llm_cfg(), Canned::new(two)).unwrap();
        assert!(matches!(ex.extract(&Utterance::new("Q").unwrap()), Err(ExtractError::MalformedResponse(_))));
    }

    #[test]
    fn quotes_and_question_marks_are_cleaned() {
        let ex = Extractor::with_transport(&llm_cfg(), Canned::new(chat("  \u{201c}Seaborn activated it?\u{201d} ")))
            .unwrap();
        let p = ex.extract(&Utterance::new("Did Seaborn activate it?").unwrap()).unwrap();
        assert_eq!(p.text, "Seaborn activated it.");
        assert_eq!(p.trace.transforms_applied, vec![Transform::RemoteLlm, Transform::StripQuestionMark]);
    }

    #[test]
    fn frame_prefixed_reply_is_repaired() {
        let ex =
            Extractor::with_transport(&llm_cfg(), Canned::new(chat("I wonder whether the cable is live."))).unwrap();
        let p = ex.extract(&Utterance::new("I wonder whether the cable is live.").unwrap()).unwrap();
        assert_eq!(proposition_violation(IfidLexicon::bundled(), &p.text), None);
        assert_eq!(p.text, "The cable is live.");
    }

    #[test]
    fn warm_cache_skips_network() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExtractorConfig { cache_path: Some(dir.path().join("c.jsonl")), ..llm_cfg() };
        let u = Utterance::new("Is X?").unwrap();
        let t = Canned::new(chat("X."));
        let ex = Extractor::with_transport(&cfg, t.clone()).unwrap();
        ex.extract(&u).unwrap();
        assert_eq!(t.calls.load(Ordering::SeqCst), 1);

        let t2 = Canned::new(chat("unused"));
        let ex2 = Extractor::with_transport(&cfg, t2.clone()).unwrap();
        assert_eq!(ex2.extract(&u).unwrap().text, "X.");
        assert_eq!(ex2.extract(&u).unwrap().text, "X.");
        assert_eq!(t2.calls.load(Ordering::SeqCst), 0);
    }

    #[test]
    fn missing_key_is_auth_error() {
        let cfg = ExtractorConfig { api_key: Some("  ".into()), ..llm_cfg() };
        assert!(matches!(Extractor::new(&cfg), Err(ExtractError::AuthMissing)));
    }

    #[test]
    fn extract_many_keeps_order() {
        let t = Canned::new(chat("Same."));
        let ex = Extractor::with_transport(&llm_cfg(), t.clone()).unwrap();
        let us: Vec<Utterance> = (0..10).map(|i| Utterance::new(format!("Is {i} ok?")).unwrap()).collect();
        let out = ex.extract_many(&us);
        assert_eq!(out.len(), 10);
        assert_eq!(t.calls.load(Ordering::SeqCst), 10);
    }

    #[test]
    fn strip_quotes_nested() {
        assert_eq!(strip_quotes("\"'x'\""), "x");
        assert_eq!(strip_quotes("\""), "\"");
        assert_eq!(strip_quotes("it's"), "it's");
    }
}
