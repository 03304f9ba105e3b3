//! Deterministic local embeddings, truncation and cosine similarity.

use propshift::embedding::{cosine, embed, truncate_renormalize, EmbeddingProviderConfig, HashEmbedder};

fn main() {
    let cfg = EmbeddingProviderConfig::local(3072, 256, 0);
    let texts = [
        "Anatel postponed the satellite license auction.",
        "The satellite license auction was postponed by Anatel.",
        "Disney+ offered pre-sale discounts in Brazil.",
    ];
    let vs: Vec<_> = texts.iter().map(|t| embed(&cfg, t).unwrap()).collect();
    for i in 0..texts.len() {
        for j in i + 1..texts.len() {
            println!("cos({i}, {j}) = {:.4}", cosine(&vs[i], &vs[j]).unwrap());
        }
    }

    // A 256-d local embedding is the renormalized prefix of the native vector.
    let h = HashEmbedder::new(3072, 0);
    let native = h.raw_native(texts[0]);
    let prefix = truncate_renormalize(&native, 256).unwrap();
    println!("prefix matches: {}", prefix == vs[0]);
    println!("norm {:.6}, dim {}", prefix.norm(), prefix.dim());
}
