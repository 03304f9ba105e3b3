//! Original versus propositional retrieval over the mini corpus.

use propshift::backends::{Extractor, ExtractorConfig};
use propshift::corpus::{ingest, load_corpus, SearchPolicy};
use propshift::embedding::{Embedder, EmbeddingProviderConfig};
use propshift::evalkit::{load_queries, run_comparison, ReportFormat, DEFAULT_EPSILON};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let cfg = EmbeddingProviderConfig::local(3072, 256, 0);
    let index = ingest(&load_corpus(&data.join("mini_corpus.jsonl"))?, &cfg)?;
    let queries = load_queries(&data.join("sample_queries.csv"))?;
    let run = run_comparison(
        &queries,
        &index,
        &Embedder::new(&cfg)?,
        &Extractor::new(&ExtractorConfig::default())?,
        &SearchPolicy::top_k(20),
        4,
    );
    print!("{}", run.render(ReportFormat::MarkdownTables, DEFAULT_EPSILON));
    Ok(())
}
