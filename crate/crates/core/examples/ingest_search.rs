//! Builds an index from the bundled mini corpus, saves it, reloads it and
//! runs a search.

use propshift::corpus::{ingest, load_corpus, load_index, save_index, search, SearchPolicy};
use propshift::embedding::{embed, EmbeddingProviderConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let data = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let docs = load_corpus(&data.join("mini_corpus.jsonl"))?;
    let cfg = EmbeddingProviderConfig::local(3072, 256, 0);
    let index = ingest(&docs, &cfg)?;
    println!("{}", index.summary());

    let path = std::env::temp_dir().join("propshift-example.idx");
    save_index(&index, &path)?;
    let index = load_index(&path)?;
    println!("saved and reloaded {} ({} bytes)", path.display(), std::fs::metadata(&path)?.len());

    let query = "TelComp challenged TPU fees in municipalities";
    let q = embed(&cfg, query)?;
    for (rank, hit) in search(&index, &q, &SearchPolicy::top_k(5))?.iter().enumerate() {
        println!("{:>2}. {:<12} {:<9} {:.4}", rank + 1, hit.chunk_id, hit.layer, hit.score);
    }
    std::fs::remove_file(&path)?;
    Ok(())
}
