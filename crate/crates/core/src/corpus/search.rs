use std::cmp::Ordering;

use serde::Serialize;

use super::{CorpusError, Index, Layer};
use crate::embedding::{cosine_raw, EmbeddingVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    TopK,
    Threshold,
    Both,
}

impl std::str::FromStr for SearchMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "topk" | "top-k" => Ok(SearchMode::TopK),
            "threshold" => Ok(SearchMode::Threshold),
            "both" => Ok(SearchMode::Both),
            other => Err(format!("unknown search mode `{other}`")),
        }
    }
}

/// Which scanned chunks to return.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchPolicy {
    pub mode: SearchMode,
    pub k: usize,
    pub min_similarity: f64,
}

impl Default for SearchPolicy {
    /// At most 32 hits, all scoring at least 0.50.
    fn default() -> Self {
        SearchPolicy { mode: SearchMode::Both, k: 32, min_similarity: 0.50 }
    }
}

impl SearchPolicy {
    pub fn top_k(k: usize) -> Self {
        SearchPolicy { mode: SearchMode::TopK, k, ..Default::default() }
    }

    pub fn threshold(min_similarity: f64) -> Self {
        SearchPolicy { mode: SearchMode::Threshold, min_similarity, ..Default::default() }
    }

    pub fn both(k: usize, min_similarity: f64) -> Self {
        SearchPolicy { mode: SearchMode::Both, k, min_similarity }
    }

    pub fn validate(&self) -> Result<(), CorpusError> {
        if self.mode != SearchMode::Threshold && self.k == 0 {
            return Err(CorpusError::InvalidPolicy("k must be at least 1".into()));
        }
        if self.mode != SearchMode::TopK && !(-1.0..=1.0).contains(&self.min_similarity) {
            return Err(CorpusError::InvalidPolicy(format!(
                "min_similarity {} is outside [-1, 1]",
                self.min_similarity
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Hit {
    pub chunk_id: String,
    pub layer: Layer,
    pub score: f64,
}

/// Scores every chunk and applies `policy`. Hits are ordered by descending
/// score, ties by ascending chunk id.
pub fn search(index: &Index, query: &EmbeddingVector, policy: &SearchPolicy) -> Result<Vec<Hit>, CorpusError> {
    policy.validate()?;
    if query.dim() != index.dim() {
        return Err(CorpusError::DimensionMismatch { expected: index.dim(), found: query.dim() });
    }
    let mut hits: Vec<Hit> = index
        .chunks()
        .iter()
        .map(|c| Hit {
            chunk_id: c.chunk_id.clone(),
            layer: c.layer,
            score: cosine_raw(query.values(), c.vector.values()),
        })
        .filter(|h| policy.mode == SearchMode::TopK || h.score >= policy.min_similarity)
        .collect();
    hits.sort_by(hit_order);
    if policy.mode != SearchMode::Threshold {
        hits.truncate(policy.k);
    }
    Ok(hits)
}

fn hit_order(a: &Hit, b: &Hit) -> Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.chunk_id.cmp(&b.chunk_id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Chunk;

    fn unit(x: f64) -> EmbeddingVector {
        EmbeddingVector::normalized(&[x, (1.0 - x * x).sqrt()]).unwrap()
    }

    // Query is (1, 0) so each chunk scores its first component.
    fn index(scores: &[f64]) -> Index {
        let chunks = scores
            .iter()
            .enumerate()
            .map(|(i, &s)| Chunk {
                chunk_id: format!("c{i}"),
                doc_id: format!("d{i}"),
                layer: Layer::Paragraph,
                ordinal: 0,
                text: String::new(),
                vector: unit(s),
            })
            .collect();
        Index::new(2, chunks).unwrap()
    }

    fn scores(hits: &[Hit]) -> Vec<f64> {
        hits.iter().map(|h| (h.score * 1e4).round() / 1e4).collect()
    }

    #[test]
    fn top_k_and_threshold() {
        let ix = index(&[0.9, 0.4, 0.7]);
        let q = unit(1.0);
        assert_eq!(scores(&search(&ix, &q, &SearchPolicy::top_k(2)).unwrap()), vec![0.9, 0.7]);
        assert_eq!(scores(&search(&ix, &q, &SearchPolicy::threshold(0.5)).unwrap()), vec![0.9, 0.7]);
        assert_eq!(scores(&search(&ix, &q, &SearchPolicy::top_k(10)).unwrap()), vec![0.9, 0.7, 0.4]);
        assert_eq!(scores(&search(&ix, &q, &SearchPolicy::both(1, 0.5)).unwrap()), vec![0.9]);
        assert!(search(&ix, &q, &SearchPolicy::both(5, 0.95)).unwrap().is_empty());
    }

    #[test]
    fn ties_break_on_chunk_id() {
        let ix = index(&[0.5, 0.5, 0.5]);
        let ids: Vec<String> =
            search(&ix, &unit(1.0), &SearchPolicy::top_k(3)).unwrap().into_iter().map(|h| h.chunk_id).collect();
        assert_eq!(ids, vec!["c0", "c1", "c2"]);
    }

    #[test]
    fn empty_index_and_dim_mismatch() {
        let ix = Index::new(2, vec![]).unwrap();
        assert!(search(&ix, &unit(1.0), &SearchPolicy::default()).unwrap().is_empty());
        let q3 = EmbeddingVector::normalized(&[1.0f64, 0.0, 0.0]).unwrap();
        assert!(matches!(search(&ix, &q3, &SearchPolicy::default()), Err(CorpusError::DimensionMismatch { .. })));
    }

    #[test]
    fn invalid_policies() {
        let ix = index(&[0.1]);
        assert!(search(&ix, &unit(1.0), &SearchPolicy::top_k(0)).is_err());
        assert!(search(&ix, &unit(1.0), &SearchPolicy::threshold(1.5)).is_err());
    }
}
