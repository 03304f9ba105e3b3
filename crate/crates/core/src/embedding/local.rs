use std::collections::BTreeMap;

use super::{truncate_renormalize, EmbeddingError, EmbeddingVector};

/// Signed-hash bag-of-words projection.
///
/// Each lowercase alphanumeric token adds `(1 + ln count) * u` to every
/// component, where `u` is drawn from `±[0.5, 1.5)` by a hash of (seed, token,
/// component). Non-constant magnitudes keep small prefixes from cancelling
/// to zero.
/// Texts sharing tokens therefore get correlated vectors, and any prefix of
/// the native vector can be computed without the rest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HashEmbedder {
    native_dim: usize,
    seed: u64,
}

impl HashEmbedder {
    pub fn new(native_dim: usize, seed: u64) -> Self {
        HashEmbedder { native_dim, seed }
    }

    /// The unnormalized native-dimension vector.
    pub fn raw_native(&self, text: &str) -> Vec<f64> {
        self.raw_prefix(text, self.native_dim)
    }

    /// Equivalent to truncating [`HashEmbedder::raw_native`] to `dim` and
    /// renormalizing.
    pub fn embed(&self, text: &str, dim: usize) -> Result<EmbeddingVector, EmbeddingError> {
        if text.trim().is_empty() {
            return Err(EmbeddingError::EmptyText);
        }
        if dim == 0 || dim > self.native_dim {
            return Err(EmbeddingError::DimensionMismatch { expected: self.native_dim, found: dim });
        }
        truncate_renormalize(&self.raw_prefix(text, dim), dim)
    }

    fn raw_prefix(&self, text: &str, dim: usize) -> Vec<f64> {
        let mut acc = vec![0.0f64; dim];
        let seed = splitmix64(self.seed);
        for (token, count) in token_counts(text) {
            let weight = 1.0 + (count as f64).ln();
            let h = splitmix64(fnv1a(token.as_bytes()) ^ seed);
            for (i, slot) in acc.iter_mut().enumerate() {
                let r = splitmix64(h ^ (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let magnitude = 0.5 + (r & ((1 << 53) - 1)) as f64 / (1u64 << 53) as f64;
                if r >> 63 == 1 {
                    *slot -= weight * magnitude;
                } else {
                    *slot += weight * magnitude;
                }
            }
        }
        acc
    }
}

fn token_counts(text: &str) -> BTreeMap<String, u32> {
    let mut counts = BTreeMap::new();
    for tok in text.split(|c: char| !c.is_alphanumeric()).filter(|t| !t.is_empty()) {
        *counts.entry(tok.to_lowercase()).or_insert(0) += 1;
    }
    counts
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::cosine;

    #[test]
    fn deterministic() {
        let h = HashEmbedder::new(3072, 7);
        assert_eq!(h.embed("alpha beta", 256).unwrap(), h.embed("alpha beta", 256).unwrap());
    }

    #[test]
    fn prefix_matches_truncated_native() {
        let h = HashEmbedder::new(128, 3);
        let text = "Seaborn activated the AMX-1 cable";
        let full = h.raw_native(text);
        assert_eq!(h.embed(text, 32).unwrap(), truncate_renormalize(&full, 32).unwrap());
    }

    #[test]
    fn case_and_punctuation_insensitive() {
        let h = HashEmbedder::new(64, 0);
        assert_eq!(h.embed("Alpha, beta!", 64).unwrap(), h.embed("alpha beta", 64).unwrap());
    }

    #[test]
    fn overlap_raises_similarity() {
        let h = HashEmbedder::new(3072, 0);
        let a = h.embed("anatel licensing regulation enforced in november", 256).unwrap();
        let b = h.embed("the anatel licensing regulation", 256).unwrap();
        let c = h.embed("disney discounts in brazil", 256).unwrap();
        assert!(cosine(&a, &b).unwrap() > cosine(&a, &c).unwrap() + 0.2);
    }

    #[test]
    fn no_tokens_is_degenerate() {
        assert_eq!(HashEmbedder::new(8, 0).embed("...", 8), Err(EmbeddingError::DegenerateVector));
    }
}
