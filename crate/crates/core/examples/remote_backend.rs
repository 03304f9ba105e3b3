//! Configures the language-model extractor and remote embeddings.
//!
//! Without PROPSHIFT_LLM_API_KEY this only shows the configuration and the
//! resulting error. With it, each argument is sent to the model, and replies
//! are cached in the temp directory.

use std::time::Duration;

use propshift::backends::{system_prompt_checksum, BackendKind, Extractor, ExtractorConfig};
use propshift::embedding::{EmbeddingProviderConfig, ProviderKind};
use propshift::speechact::Utterance;

fn main() {
    let cfg = ExtractorConfig {
        backend: BackendKind::RemoteLlm,
        timeout: Duration::from_secs(30),
        cache_path: Some(std::env::temp_dir().join("propshift-llm-cache.jsonl")),
        ..ExtractorConfig::default()
    };
    println!("model {} at {}", cfg.model_name, cfg.endpoint_url);
    println!("system prompt sha256 {}", system_prompt_checksum());

    let emb = EmbeddingProviderConfig { provider: ProviderKind::Remote, ..EmbeddingProviderConfig::default() };
    println!("embeddings: {} {}d truncated to {}d", emb.model_name, emb.native_dim, emb.target_dim);

    let extractor = match Extractor::new(&cfg) {
        Ok(e) => e,
        Err(e) => {
            println!("not calling the service: {e}");
            return;
        }
    };
    for arg in std::env::args().skip(1) {
        let Ok(u) = Utterance::new(arg.as_str()) else { continue };
        match extractor.extract(&u) {
            Ok(p) => println!("{arg}\n  -> {}", p.text),
            Err(e) => eprintln!("{arg}: {e}"),
        }
    }
}
